"""Command-line driver: spectrum, evolve, and ensemble subcommands.

All outputs are CSV (or flat key = value text) inside --output-dir, with
full round-trip float formatting and deterministic row order, so reruns
with the same config and base seed are byte-identical.

Exit codes: 0 success, 2 config error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config, manifest_lines
from .ensemble import EnsembleConfig, derive_seed, run_ensemble, _DEFECT_SALT, _NOISE_SALT
from .evolution import (
    PropagationPlan,
    characteristic_times,
    diagonalize,
    evolve_stroboscopic,
    initial_state,
    trajectory_to_csv,
)
from .geometry import (
    BilliardGeometry,
    DefectConfig,
    apply_defects,
    build_custom,
    build_quarter_stadium,
    build_rectangle,
    mask_from_text,
)
from .hamiltonian import NoiseModel, build_hamiltonian, hamiltonian_triplets
from .spectral_stats import (
    REFERENCE_KINDS,
    ks_summary,
    reference_pdf,
    spacing_histogram,
    unfold,
)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _build_geometry(cfg: RunConfig, mask_file: str | None) -> BilliardGeometry:
    if cfg.shape == "rectangle":
        return build_rectangle(cfg.lx, cfg.ly)
    if cfg.shape == "quarter_stadium":
        return build_quarter_stadium(cfg.a, cfg.r)
    path = mask_file or cfg.mask_file
    if not path:
        raise ConfigError("shape = custom requires --mask-file or mask_file key")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read mask file {path}: {exc}") from exc
    return build_custom(mask_from_text(text))


def _ensemble_config(cfg: RunConfig, g: BilliardGeometry) -> EnsembleConfig:
    _, t_revival = characteristic_times(g, cfg.coupling)
    dt = cfg.resolved_dt()
    n_steps = int(round(cfg.t_final_in_tl * t_revival / dt))
    wanted = cfg.snapshot_times or (0.0, 0.5 * t_revival, n_steps * dt)
    recorded = dt * cfg.record_stride * np.arange(n_steps // cfg.record_stride + 1)
    snapshot_steps = tuple(
        dict.fromkeys(int(np.argmin(np.abs(recorded - t))) for t in wanted)
    )
    return EnsembleConfig(
        geometry=g,
        coupling=cfg.coupling,
        dt=dt,
        n_steps=n_steps,
        record_stride=cfg.record_stride,
        cgf_n=cfg.cgf_n,
        acf_mode=cfg.cgf_mode,
        snapshot_steps=snapshot_steps,
        p_defect=cfg.p_defect,
        epsilon_max=cfg.epsilon_max,
        n_realizations=cfg.n_realizations,
        base_seed=cfg.base_seed,
        unfold_degree=cfg.unfold_degree,
    )


def _write_manifest(out: Path, cfg: RunConfig, g: BilliardGeometry, command: str) -> None:
    t_swap, t_revival = characteristic_times(g, cfg.coupling)
    dt = cfg.resolved_dt()
    extras = {
        "command": command,
        "derived_dt": repr(dt),
        "derived_n_sites": g.n_sites,
        "derived_n_bonds": g.n_bonds,
        "derived_t_swap": repr(t_swap),
        "derived_t_revival": repr(t_revival),
        "version": __version__,
    }
    out.joinpath("manifest.txt").write_text(
        "\n".join(manifest_lines(cfg, extras)) + "\n"
    )


def _write_lss(out: Path, spacings: np.ndarray, cfg: RunConfig, n_clamped: int) -> None:
    hist = spacing_histogram(spacings, cfg.lss_bins, cfg.lss_smax)
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    rows = [
        (
            c,
            d,
            reference_pdf("poisson", c),
            reference_pdf("semi_poisson", c),
            reference_pdf("wigner", c),
        )
        for c, d in zip(centers, hist.densities)
    ]
    _write_csv(
        out / "lss.csv",
        ["bin_center", "empirical_density", "poisson_pdf", "semi_poisson_pdf", "wigner_pdf"],
        rows,
    )
    distances = ks_summary(spacings)
    summary = {
        "best_fit": min(distances, key=distances.get),
        "mean_spacing": float(spacings.mean()),
        "n_clamped": n_clamped,
        "n_overflow": hist.n_overflow,
        "n_spacings": int(spacings.size),
    }
    summary.update({f"ks_{kind}": distances[kind] for kind in REFERENCE_KINDS})
    out.joinpath("lss_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n"
    )


def cmd_spectrum(cfg: RunConfig, out: Path, mask_file: str | None, command: str) -> None:
    g = _build_geometry(cfg, mask_file)
    g_r = g
    if cfg.p_defect > 0.0:
        seed_r = derive_seed(cfg.base_seed, 0)
        g_r = apply_defects(
            g,
            DefectConfig(cfg.p_defect, derive_seed(seed_r, _DEFECT_SALT)),
        )
    h = build_hamiltonian(g_r, cfg.coupling)
    sd = diagonalize(h)
    _write_csv(out / "spectrum.csv", ["eigenvalue"], [(e,) for e in sd.eigenvalues])
    if cfg.dump_hamiltonian:
        out.joinpath("hamiltonian.txt").write_text(hamiltonian_triplets(h))
    us = unfold(sd.eigenvalues, poly_degree=cfg.unfold_degree)
    _write_lss(out, us.spacings, cfg, us.n_clamped)
    _write_manifest(out, cfg, g, command)


def cmd_evolve(cfg: RunConfig, out: Path, mask_file: str | None, command: str) -> None:
    g = _build_geometry(cfg, mask_file)
    ecfg = dataclasses.replace(_ensemble_config(cfg, g), n_realizations=1)
    result = run_ensemble(ecfg)
    _write_csv(
        out / "cgf.csv",
        ["t", "coherent", "incoherent"],
        zip(result.times, result.cgf_coherent.mean, result.cgf_incoherent.mean),
    )
    _write_csv(
        out / "acf.csv",
        ["lag_time", "C"],
        zip(result.acf_lags, result.acf_of_mean),
    )
    for t, agg in zip(result.snapshot_times, result.snapshots):
        _write_snapshot(out / f"snapshot_{t:g}.csv", agg.mean, stderr=None)
    _write_momentum(out / "momentum.csv", result.momentum.mean, stderr=None)
    if cfg.dump_trajectory:
        _dump_trajectory(cfg, g, ecfg, out)
    _write_manifest(out, cfg, g, command)


def _dump_trajectory(
    cfg: RunConfig, g: BilliardGeometry, ecfg: EnsembleConfig, out: Path
) -> None:
    seed_r = derive_seed(cfg.base_seed, 0)
    g_r = g
    if cfg.p_defect > 0.0:
        g_r = apply_defects(
            g, DefectConfig(cfg.p_defect, derive_seed(seed_r, _DEFECT_SALT))
        )
    h = build_hamiltonian(g_r, cfg.coupling)
    noise = NoiseModel.from_geometry(g_r, cfg.epsilon_max, derive_seed(seed_r, _NOISE_SALT))
    plan = PropagationPlan(ecfg.dt, ecfg.n_steps, ecfg.record_stride, noise)
    traj = evolve_stroboscopic(h, plan, initial_state(g_r, ecfg.cgf_origin))
    out.joinpath("trajectory.csv").write_text(trajectory_to_csv(traj))


def _write_snapshot(path: Path, grid: np.ndarray, stderr: np.ndarray | None) -> None:
    ly, lx = grid.shape
    rows = []
    for j in range(ly):
        for i in range(lx):
            row = [i, j, grid[j, i]]
            if stderr is not None:
                row.append(stderr[j, i])
            rows.append(row)
    header = ["i", "j", "prob"] + (["prob_stderr"] if stderr is not None else [])
    _write_csv(path, header, rows)


def _write_momentum(path: Path, grid: np.ndarray, stderr: np.ndarray | None) -> None:
    ly, lx = grid.shape
    rows = []
    for wy in range(ly):
        for wx in range(lx):
            row = [wx, wy, grid[wy, wx]]
            if stderr is not None:
                row.append(stderr[wy, wx])
            rows.append(row)
    header = ["wx_index", "wy_index", "magnitude"] + (
        ["magnitude_stderr"] if stderr is not None else []
    )
    _write_csv(path, header, rows)


def cmd_ensemble(
    cfg: RunConfig, out: Path, mask_file: str | None, workers: int, command: str
) -> None:
    g = _build_geometry(cfg, mask_file)
    ecfg = _ensemble_config(cfg, g)
    result = run_ensemble(ecfg, workers=workers)
    _write_csv(
        out / "cgf.csv",
        ["t", "coherent", "coherent_stderr", "incoherent", "incoherent_stderr"],
        zip(
            result.times,
            result.cgf_coherent.mean,
            result.cgf_coherent.stderr,
            result.cgf_incoherent.mean,
            result.cgf_incoherent.stderr,
        ),
    )
    _write_csv(
        out / "acf.csv",
        ["lag_time", "C", "C_stderr"],
        zip(result.acf_lags, result.acf_of_mean, result.acf.stderr),
    )
    for t, agg in zip(result.snapshot_times, result.snapshots):
        _write_snapshot(out / f"snapshot_{t:g}.csv", agg.mean, agg.stderr)
    _write_momentum(out / "momentum.csv", result.momentum.mean, result.momentum.stderr)
    rows = []
    for r, eigenvalues in enumerate(result.eigenvalues):
        rows.extend((r, e) for e in eigenvalues)
    _write_csv(out / "spectrum.csv", ["realization", "eigenvalue"], rows)
    _write_lss(out, result.pooled_spacings, cfg, n_clamped=-1)
    _write_manifest(out, cfg, g, command)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbilliards",
        description="Single-excitation dynamics of XX spin-lattice billiards",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("spectrum", "eigenvalues and level-spacing statistics"),
        ("evolve", "single-realization trajectory observables"),
        ("ensemble", "disorder-averaged observables with standard errors"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", type=str, default=None, help="key = value config file")
        p.add_argument("--output-dir", type=str, default=None, help="where CSVs are written")
        p.add_argument("--workers", type=int, default=1, help="parallel realizations")
        p.add_argument("--mask-file", type=str, default=None, help="custom-shape grid file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        out = Path(args.output_dir or cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "spectrum":
            cmd_spectrum(cfg, out, args.mask_file, args.command)
        elif args.command == "evolve":
            cmd_evolve(cfg, out, args.mask_file, args.command)
        else:
            cmd_ensemble(cfg, out, args.mask_file, args.workers, args.command)
    except np.linalg.LinAlgError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
