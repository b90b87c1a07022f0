#!/usr/bin/env python3
"""Run the full diagnostic matrix for both billiards.

For each shape this produces: the clean spectrum with level-spacing
statistics, defected spectra at the two standard defect probabilities,
a clean evolution, and the noisy disorder ensemble.  Everything lands
under --out (default ./out), one directory per run, ready for the
figure renderer.

Usage: python scripts/reproduce_all.py [--out DIR] [--workers N]
"""

import argparse
import sys
from pathlib import Path

from spinbilliards.cli import main as cli_main

SHAPES = {
    "rectangle": "shape = rectangle\nlx = 31\nly = 15\n",
    "stadium": "shape = quarter_stadium\na = 15\nr = 15\n",
}

# pooled defected spectra ride the ensemble command; the short horizon
# keeps the (unused) trajectories cheap
VARIANTS = {
    "spectrum_clean": ("spectrum", ""),
    "spectrum_defects_weak": (
        "ensemble",
        "p_defect = 5e-3\nn_realizations = 10\nt_final_in_tl = 0.1\n",
    ),
    "spectrum_defects_strong": (
        "ensemble",
        "p_defect = 5e-2\nn_realizations = 10\nt_final_in_tl = 0.1\n",
    ),
    "evolve_clean": ("evolve", ""),
    "ensemble_noisy": (
        "ensemble",
        "p_defect = 5e-3\nepsilon_max = 1e-5\nn_realizations = 10\n",
    ),
}

BASE = "base_seed = 20240901\n"


def run(out_root: Path, workers: int) -> int:
    for shape, shape_keys in SHAPES.items():
        for variant, (command, extra_keys) in VARIANTS.items():
            out_dir = out_root / f"{shape}_{variant}"
            cfg_path = out_root / f"{shape}_{variant}.cfg"
            out_root.mkdir(parents=True, exist_ok=True)
            cfg_path.write_text(shape_keys + BASE + extra_keys)
            argv = [
                command,
                "--config", str(cfg_path),
                "--output-dir", str(out_dir),
                "--workers", str(workers),
            ]
            print(f"[{shape}/{variant}] spinbilliards {' '.join(argv)}")
            code = cli_main(argv)
            if code != 0:
                print(f"  failed with exit code {code}", file=sys.stderr)
                return code
    print(f"all runs complete under {out_root}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("out"))
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    sys.exit(run(args.out, args.workers))
