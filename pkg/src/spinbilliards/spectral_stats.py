"""Level-spacing statistics: unfolding, histograms, reference laws, KS fit.

Unfolding rescales a spectrum so the local mean spacing is 1, which makes
spacing distributions comparable across systems.  The staircase is fitted
with a global least-squares polynomial (degree 7 by default) after trimming
a small fraction of levels at each spectral edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

REFERENCE_KINDS = ("poisson", "semi_poisson", "wigner")


@dataclass(frozen=True, eq=False)
class UnfoldedSpectrum:
    unfolded_levels: np.ndarray
    spacings: np.ndarray
    n_clamped: int


@dataclass(frozen=True, eq=False)
class SpacingHistogram:
    bin_edges: np.ndarray
    densities: np.ndarray
    n_overflow: int


def unfold(
    eigenvalues: np.ndarray,
    poly_degree: int = 7,
    trim_fraction: float = 0.02,
) -> UnfoldedSpectrum:
    """Map levels through a polynomial fit of the cumulative staircase.

    The staircase point for the k-th sorted level is k + 1/2 and the fit
    uses the full spectrum; the output drops trim_fraction of the levels at
    each spectral edge, where the polynomial oscillates most.  Spacings of
    the mapped levels are clamped at zero where the fit is locally
    non-monotone; the clamp count is reported.
    """
    if poly_degree < 1:
        raise ValueError(f"poly_degree must be >= 1, got {poly_degree}")
    levels = np.sort(np.asarray(eigenvalues, dtype=np.float64))
    n_trim = int(trim_fraction * levels.size)
    kept = levels[n_trim : levels.size - n_trim]
    if np.unique(kept).size < poly_degree + 2:
        raise ValueError(
            f"need at least poly_degree + 2 = {poly_degree + 2} distinct "
            f"levels after trimming, got {np.unique(kept).size}"
        )
    staircase = np.arange(levels.size) + 0.5
    fit = Polynomial.fit(levels, staircase, deg=poly_degree)
    unfolded = fit(kept)
    raw = np.diff(unfolded)
    n_clamped = int((raw < 0).sum())
    spacings = np.clip(raw, 0.0, None)
    return UnfoldedSpectrum(
        unfolded_levels=unfolded, spacings=spacings, n_clamped=n_clamped
    )


def spacing_histogram(
    us: UnfoldedSpectrum | np.ndarray, n_bins: int, s_max: float
) -> SpacingHistogram:
    """Density-normalized spacing histogram on [0, s_max].

    Accepts an UnfoldedSpectrum or a bare spacing array (pooled ensembles).
    Spacings beyond s_max are excluded from the normalization and counted
    in n_overflow.
    """
    spacings = np.asarray(getattr(us, "spacings", us), dtype=np.float64)
    if spacings.size == 0:
        raise ValueError("no spacings to histogram")
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    if s_max <= 0:
        raise ValueError(f"s_max must be positive, got {s_max}")
    in_range = spacings[spacings <= s_max]
    n_overflow = spacings.size - in_range.size
    edges = np.linspace(0.0, s_max, n_bins + 1)
    counts, _ = np.histogram(in_range, bins=edges)
    width = edges[1] - edges[0]
    densities = counts / (in_range.size * width) if in_range.size else counts * 0.0
    return SpacingHistogram(bin_edges=edges, densities=densities, n_overflow=n_overflow)


def reference_pdf(kind: str, s: float | np.ndarray) -> float | np.ndarray:
    """Reference spacing densities, each with unit norm and unit mean.

    poisson: exp(-s); semi_poisson: 4 s exp(-2 s);
    wigner: (pi/2) s exp(-pi s^2 / 4).
    """
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(s_arr < 0):
        raise ValueError("spacing must be >= 0")
    if kind == "poisson":
        out = np.exp(-s_arr)
    elif kind == "semi_poisson":
        out = 4.0 * s_arr * np.exp(-2.0 * s_arr)
    elif kind == "wigner":
        out = 0.5 * np.pi * s_arr * np.exp(-0.25 * np.pi * s_arr**2)
    else:
        raise ValueError(f"unknown reference kind {kind!r}")
    return out if isinstance(s, np.ndarray) else float(out)


def reference_cdf(kind: str, s: float | np.ndarray) -> float | np.ndarray:
    """Closed-form CDFs matching reference_pdf."""
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(s_arr < 0):
        raise ValueError("spacing must be >= 0")
    if kind == "poisson":
        out = 1.0 - np.exp(-s_arr)
    elif kind == "semi_poisson":
        out = 1.0 - (1.0 + 2.0 * s_arr) * np.exp(-2.0 * s_arr)
    elif kind == "wigner":
        out = 1.0 - np.exp(-0.25 * np.pi * s_arr**2)
    else:
        raise ValueError(f"unknown reference kind {kind!r}")
    return out if isinstance(s, np.ndarray) else float(out)


def ks_distance(spacings: np.ndarray, kind: str) -> float:
    """Kolmogorov-Smirnov statistic against one reference CDF."""
    spacings = np.asarray(spacings, dtype=np.float64)
    if spacings.size < 10:
        raise ValueError(f"need at least 10 spacings, got {spacings.size}")
    ordered = np.sort(spacings)
    n = ordered.size
    cdf = reference_cdf(kind, ordered)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def ks_summary(spacings: np.ndarray) -> dict[str, float]:
    """KS distance for every reference kind."""
    return {kind: ks_distance(spacings, kind) for kind in REFERENCE_KINDS}
