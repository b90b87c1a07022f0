"""Build the four panel kinds from spinbilliards CSV files.

Panel kinds: ``snapshots`` (one population heatmap per input CSV), ``lss``
(spacing histogram with the three reference curves), ``cgf_acf`` (signal
and autocorrelation stacked), ``momentum`` (frequency-magnitude heatmap,
log color scale by default).  Rendering is deterministic: identical inputs
give byte-identical images.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LinearSegmentedColormap
from matplotlib.figure import Figure

PANEL_KINDS = ("snapshots", "lss", "cgf_acf", "momentum")

# "zero is black" heat coloring, rising through blue into red
HEAT_CMAP = LinearSegmentedColormap.from_list(
    "billiard_heat", ["black", "mediumblue", "red"]
)

PNG_METADATA = {"Software": "billiardfigs"}


class InputError(ValueError):
    """A missing or ill-formed input CSV; the message names the culprit."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[Path, ...]
    output: Path
    scale: str = "log"
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.kind not in PANEL_KINDS:
            raise InputError(f"unknown panel kind {self.kind!r}, expected one of {PANEL_KINDS}")
        if not self.inputs:
            raise InputError("at least one input CSV is required")
        if self.scale not in ("log", "linear"):
            raise InputError(f"scale must be log or linear, got {self.scale!r}")


def load_columns(path: Path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read a CSV into float columns, insisting on the required header names."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc})") from exc
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise InputError(f"{path}: empty file") from None
    for column in required:
        if column not in header:
            raise InputError(f"{path}: missing column {column!r}")
    rows = list(reader)
    if not rows:
        raise InputError(f"{path}: no data rows")
    data: dict[str, np.ndarray] = {}
    for idx, name in enumerate(header):
        try:
            data[name] = np.array([float(row[idx]) for row in rows])
        except (ValueError, IndexError) as exc:
            raise InputError(f"{path}: bad value in column {name!r} ({exc})") from exc
    return data


def grid_from_indexed(data, xkey: str, ykey: str, vkey: str, path: Path) -> np.ndarray:
    xs = data[xkey].astype(int)
    ys = data[ykey].astype(int)
    if xs.min() < 0 or ys.min() < 0:
        raise InputError(f"{path}: negative index in {xkey!r}/{ykey!r}")
    grid = np.zeros((ys.max() + 1, xs.max() + 1))
    grid[ys, xs] = data[vkey]
    return grid


def _panel_snapshots(spec: FigureSpec, fig: Figure) -> None:
    axes = fig.subplots(1, len(spec.inputs), squeeze=False)[0]
    for ax, path in zip(axes, spec.inputs):
        data = load_columns(path, ("i", "j", "prob"))
        grid = grid_from_indexed(data, "i", "j", "prob", path)
        ax.imshow(grid, origin="lower", cmap=HEAT_CMAP, vmin=0.0, interpolation="nearest")
        ax.set_title(path.stem, fontsize=9)
        ax.set_xlabel("i")
        ax.set_ylabel("j")


def _panel_lss(spec: FigureSpec, fig: Figure) -> None:
    ax = fig.subplots()
    data = load_columns(
        spec.inputs[0],
        ("bin_center", "empirical_density", "poisson_pdf", "semi_poisson_pdf", "wigner_pdf"),
    )
    centers = data["bin_center"]
    width = centers[1] - centers[0] if centers.size > 1 else 1.0
    ax.bar(centers, data["empirical_density"], width=width, color="lightgray",
           edgecolor="gray", label="empirical")
    ax.plot(centers, data["poisson_pdf"], color="red", ls="--", label="Poisson")
    ax.plot(centers, data["semi_poisson_pdf"], color="black", ls="--", label="semi-Poisson")
    ax.plot(centers, data["wigner_pdf"], color="mediumblue", ls=":", label="Wigner")
    ax.set_xlabel("s")
    ax.set_ylabel("P(s)")
    ax.legend(frameon=False)


def _panel_cgf_acf(spec: FigureSpec, fig: Figure) -> None:
    if len(spec.inputs) < 2:
        raise InputError("cgf_acf needs two inputs: cgf.csv and acf.csv")
    cgf_path, acf_path = spec.inputs[0], spec.inputs[1]
    cgf = load_columns(cgf_path, ("t", "coherent", "incoherent"))
    acf = load_columns(acf_path, ("lag_time", "C"))
    ax_cgf, ax_acf = fig.subplots(2, 1)
    for column, color in (("coherent", "black"), ("incoherent", "mediumblue")):
        ax_cgf.plot(cgf["t"], cgf[column], color=color, lw=0.8, label=column)
        err_key = f"{column}_stderr"
        if err_key in cgf:
            ax_cgf.fill_between(
                cgf["t"],
                cgf[column] - cgf[err_key],
                cgf[column] + cgf[err_key],
                color=color,
                alpha=0.25,
                linewidth=0,
            )
    ax_cgf.set_xlabel("t")
    ax_cgf.set_ylabel("coarse-grained fidelity")
    ax_cgf.legend(frameon=False, fontsize=8)

    ax_acf.plot(acf["lag_time"], acf["C"], color="black", lw=0.8)
    if "C_stderr" in acf:
        ax_acf.fill_between(
            acf["lag_time"],
            acf["C"] - acf["C_stderr"],
            acf["C"] + acf["C_stderr"],
            color="black",
            alpha=0.25,
            linewidth=0,
        )
    ax_acf.set_xlabel("lag")
    ax_acf.set_ylabel("autocorrelation")


def _panel_momentum(spec: FigureSpec, fig: Figure) -> None:
    ax = fig.subplots()
    path = spec.inputs[0]
    data = load_columns(path, ("wx_index", "wy_index", "magnitude"))
    grid = grid_from_indexed(data, "wx_index", "wy_index", "magnitude", path)
    if spec.scale == "log":
        positive = grid[grid > 0]
        floor = positive.min() * 1e-3 if positive.size else 1.0
        shown = np.log10(np.maximum(grid, floor))
        label = "log10 |F|"
    else:
        shown = grid
        label = "|F|"
    im = ax.imshow(shown, origin="lower", cmap=HEAT_CMAP, interpolation="nearest")
    fig.colorbar(im, ax=ax, label=label)
    ax.set_xlabel("wx index")
    ax.set_ylabel("wy index")


_PANELS = {
    "snapshots": _panel_snapshots,
    "lss": _panel_lss,
    "cgf_acf": _panel_cgf_acf,
    "momentum": _panel_momentum,
}


def build_figure(spec: FigureSpec) -> Figure:
    """Assemble the matplotlib figure for a spec without writing it."""
    width = 4.0 * len(spec.inputs) if spec.kind == "snapshots" else 6.0
    height = 6.0 if spec.kind == "cgf_acf" else 4.0
    fig = Figure(figsize=(width, height))
    _PANELS[spec.kind](spec, fig)
    fig.set_layout_engine("tight")
    return fig


def render(spec: FigureSpec) -> Path:
    """Write the figure to spec.output; identical inputs give identical bytes."""
    fig = build_figure(spec)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=spec.dpi, metadata=PNG_METADATA)
    plt.close("all")
    return spec.output
