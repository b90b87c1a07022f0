"""The renderer consumes the primary CLI's CSV outputs, so the reference
run is produced by invoking that CLI as a subprocess."""

import subprocess
import sys

import numpy as np
import pytest

from billiardfigs import FigureSpec, InputError, build_figure, render
from billiardfigs.cli import main
from billiardfigs.render import load_columns

CONFIG = """\
lx = 9
ly = 4
t_final_in_tl = 2
n_realizations = 3
p_defect = 0.05
epsilon_max = 1e-4
base_seed = 13
"""


@pytest.fixture(scope="module")
def reference_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("reference")
    cfg = root / "run.cfg"
    cfg.write_text(CONFIG)
    dirs = {}
    for command in ("spectrum", "evolve", "ensemble"):
        out = root / command
        proc = subprocess.run(
            [sys.executable, "-m", "spinbilliards.cli", command,
             "--config", str(cfg), "--output-dir", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        dirs[command] = out
    return dirs


def specs_for(reference_run, out_dir):
    evolve, ensemble, spectrum = (
        reference_run["evolve"],
        reference_run["ensemble"],
        reference_run["spectrum"],
    )
    snapshots = sorted(evolve.glob("snapshot_*.csv"))
    return {
        "snapshots": FigureSpec("snapshots", tuple(snapshots), out_dir / "snapshots.png"),
        "lss": FigureSpec("lss", (spectrum / "lss.csv",), out_dir / "lss.png"),
        "cgf_acf": FigureSpec(
            "cgf_acf", (ensemble / "cgf.csv", ensemble / "acf.csv"), out_dir / "cgf_acf.png"
        ),
        "momentum": FigureSpec("momentum", (evolve / "momentum.csv",), out_dir / "momentum.png"),
    }


class TestRender:
    def test_all_four_panel_kinds_render(self, reference_run, tmp_path):
        for kind, spec in specs_for(reference_run, tmp_path).items():
            out = render(spec)
            assert out.exists() and out.stat().st_size > 0, kind

    def test_repeated_invocations_are_byte_identical(self, reference_run, tmp_path):
        for kind, spec in specs_for(reference_run, tmp_path / "a").items():
            first = render(spec).read_bytes()
            second = render(spec).read_bytes()
            assert first == second, kind

    def test_inputs_never_mutated(self, reference_run, tmp_path):
        spec = specs_for(reference_run, tmp_path)["cgf_acf"]
        before = [p.read_bytes() for p in spec.inputs]
        render(spec)
        after = [p.read_bytes() for p in spec.inputs]
        assert before == after

    def test_lss_panel_overlays_three_reference_curves(self, reference_run, tmp_path):
        spec = specs_for(reference_run, tmp_path)["lss"]
        fig = build_figure(spec)
        ax = fig.axes[0]
        labels = {line.get_label() for line in ax.lines}
        assert {"Poisson", "semi-Poisson", "Wigner"} <= labels

    def test_snapshot_zero_shows_single_bright_corner(self, reference_run):
        path = reference_run["evolve"] / "snapshot_0.csv"
        data = load_columns(path, ("i", "j", "prob"))
        probs = data["prob"]
        assert probs.max() == 1.0
        assert (probs > 0).sum() == 1
        brightest = np.argmax(probs)
        assert data["i"][brightest] == 0 and data["j"][brightest] == 0

    def test_synthetic_exponential_lss_hugs_poisson_curve(self, tmp_path):
        rng = np.random.default_rng(6)
        samples = rng.exponential(1.0, 200_000)
        edges = np.linspace(0.0, 4.0, 25)
        counts, _ = np.histogram(samples[samples <= 4.0], bins=edges)
        centers = 0.5 * (edges[:-1] + edges[1:])
        density = counts / (counts.sum() * (edges[1] - edges[0]))
        lines = ["bin_center,empirical_density,poisson_pdf,semi_poisson_pdf,wigner_pdf"]
        for c, d in zip(centers.tolist(), density.tolist()):
            poisson = float(np.exp(-c))
            semi = float(4 * c * np.exp(-2 * c))
            wigner = float(0.5 * np.pi * c * np.exp(-0.25 * np.pi * c**2))
            lines.append(f"{c!r},{d!r},{poisson!r},{semi!r},{wigner!r}")
        path = tmp_path / "lss.csv"
        path.write_text("\n".join(lines) + "\n")
        spec = FigureSpec("lss", (path,), tmp_path / "lss.png")
        render(spec)
        data = load_columns(path, ("empirical_density", "poisson_pdf"))
        # normalization over the truncated window inflates the density by
        # 1/(1 - exp(-4)); undo it before comparing against exp(-s)
        rescaled = data["empirical_density"] * (1 - np.exp(-4.0))
        assert np.abs(rescaled - data["poisson_pdf"]).max() < 0.02


class TestErrors:
    def test_missing_file_names_it(self, tmp_path, capsys):
        code = main(["--kind", "lss", "--in", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "x.png")])
        assert code != 0
        assert "nope.csv" in capsys.readouterr().err

    def test_missing_column_names_file_and_column(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        code = main(["--kind", "momentum", "--in", str(bad),
                     "--out", str(tmp_path / "x.png")])
        assert code != 0
        err = capsys.readouterr().err
        assert "bad.csv" in err and "wx_index" in err

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(InputError, match="panel kind"):
            FigureSpec("pie", (tmp_path / "a.csv",), tmp_path / "x.png")

    def test_cgf_acf_requires_two_inputs(self, tmp_path):
        cgf = tmp_path / "cgf.csv"
        cgf.write_text("t,coherent,incoherent\n0.0,1.0,1.0\n")
        with pytest.raises(InputError, match="two inputs"):
            build_figure(FigureSpec("cgf_acf", (cgf,), tmp_path / "x.png"))

    def test_bad_value_names_column(self, tmp_path):
        bad = tmp_path / "momentum.csv"
        bad.write_text("wx_index,wy_index,magnitude\n0,0,oops\n")
        with pytest.raises(InputError, match="magnitude"):
            build_figure(FigureSpec("momentum", (bad,), tmp_path / "x.png"))
