"""Measured quantities: fidelity, coarse-grained fidelity, autocorrelation,
population snapshots, momentum distributions, revival contrast."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import Trajectory
from .geometry import BilliardGeometry, SiteCoord

CGF_MODES = ("coherent", "incoherent")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")
        if self.times.size >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """DFT magnitudes over frequency indices; magnitudes[wy, wx]."""

    dims: tuple[int, int]
    magnitudes: np.ndarray


def fidelity(psi0: np.ndarray, psit: np.ndarray) -> float:
    """Survival probability |<psi0|psit>|^2."""
    if psi0.shape != psit.shape:
        raise ValueError(f"dimension mismatch: {psi0.shape} vs {psit.shape}")
    return float(np.abs(np.vdot(psi0, psit)) ** 2)


def _region_indices(
    g: BilliardGeometry, origin: SiteCoord, n: int
) -> np.ndarray:
    oi, oj = int(origin[0]), int(origin[1])
    if (oi, oj) not in g.index_of:
        raise ValueError(f"origin {(oi, oj)} is not occupied")
    if n < 0:
        raise ValueError(f"region size n must be >= 0, got {n}")
    members = [
        m
        for (i, j), m in g.index_of.items()
        if oi <= i <= oi + n and oj <= j <= oj + n
    ]
    return np.asarray(sorted(members), dtype=np.int64)


def coarse_grained_fidelity(
    psit: np.ndarray,
    g: BilliardGeometry,
    origin: SiteCoord = (0, 0),
    n: int = 3,
    mode: str = "coherent",
) -> float:
    """Survival measure over the (n+1)^2 block with corner at ``origin``.

    coherent: |sum_region psi_m|^2, the literal amplitude sum (can exceed 1
    for delocalized states).  incoherent: sum_region |psi_m|^2, the
    population a fluorescence readout collects.
    """
    if mode not in CGF_MODES:
        raise ValueError(f"mode must be one of {CGF_MODES}, got {mode!r}")
    region = _region_indices(g, origin, n)
    if mode == "coherent":
        return float(np.abs(psit[region].sum()) ** 2)
    return float((np.abs(psit[region]) ** 2).sum())


def cgf_time_series(
    traj: Trajectory,
    g: BilliardGeometry,
    origin: SiteCoord = (0, 0),
    n: int = 3,
    mode: str = "coherent",
) -> TimeSeries:
    """Coarse-grained fidelity along a trajectory."""
    if mode not in CGF_MODES:
        raise ValueError(f"mode must be one of {CGF_MODES}, got {mode!r}")
    region = _region_indices(g, origin, n)
    block = traj.states[:, region]
    if mode == "coherent":
        values = np.abs(block.sum(axis=1)) ** 2
    else:
        values = (np.abs(block) ** 2).sum(axis=1)
    return TimeSeries(times=traj.times.copy(), values=values)


def autocorrelation(series: TimeSeries) -> TimeSeries:
    """Normalized circular autocorrelation of the mean-removed series.

    C(0) = 1 and lags run over k = 0..len-1 with lag time k * dt.  The
    circular estimator is exact for signals commensurate with the window,
    unlike the linearly tapered one.
    """
    v = np.asarray(series.values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("autocorrelation needs at least 2 points")
    steps = np.diff(series.times)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=1e-12):
        raise ValueError("autocorrelation requires uniform time spacing")
    x = v - v.mean()
    if float(x @ x) == 0.0:
        raise ValueError("degenerate input: series has zero variance")
    spectrum = np.abs(np.fft.fft(x)) ** 2
    raw = np.fft.ifft(spectrum).real
    corr = raw / raw[0]
    lags = dt * np.arange(v.size)
    return TimeSeries(times=lags, values=corr)


def population_snapshot(psit: np.ndarray, g: BilliardGeometry) -> np.ndarray:
    """|psi|^2 on the bounding box grid; zero outside the mask."""
    if psit.shape[0] != g.n_sites:
        raise ValueError(f"state has dimension {psit.shape[0]}, expected {g.n_sites}")
    grid = np.zeros((g.ly, g.lx))
    grid[g.coords[:, 1], g.coords[:, 0]] = np.abs(psit) ** 2
    return grid


def momentum_distribution(psit: np.ndarray, g: BilliardGeometry) -> MomentumGrid:
    """Magnitudes of the unnormalized 2D DFT of the embedded amplitudes."""
    if psit.shape[0] != g.n_sites:
        raise ValueError(f"state has dimension {psit.shape[0]}, expected {g.n_sites}")
    embedded = np.zeros((g.ly, g.lx), dtype=np.complex128)
    embedded[g.coords[:, 1], g.coords[:, 0]] = psit
    return MomentumGrid(dims=(g.lx, g.ly), magnitudes=np.abs(np.fft.fft2(embedded)))


def peak_census(mg: MomentumGrid, threshold_fraction: float) -> int:
    """Number of frequency cells at or above threshold_fraction of the max."""
    if not 0.0 < threshold_fraction < 1.0:
        raise ValueError(
            f"threshold_fraction must lie in (0, 1), got {threshold_fraction}"
        )
    return int((mg.magnitudes >= threshold_fraction * mg.magnitudes.max()).sum())


def revival_contrast(
    series: TimeSeries,
    revival_time: float,
    n_max: int = 10,
    window_fraction: float = 0.25,
) -> float:
    """Mean of windowed maxima near k * revival_time over the global mean.

    For k = 1..n_max the maximum inside a window of half-width
    window_fraction * revival_time around k * revival_time is collected
    (windows clipped to the data span); the contrast is the mean of those
    maxima divided by the series mean.
    """
    t = series.times
    if t[-1] < n_max * revival_time - window_fraction * revival_time:
        raise ValueError(
            f"series spans {t[-1]:.3g}, needs about {n_max * revival_time:.3g} "
            f"for {n_max} revivals"
        )
    half = window_fraction * revival_time
    maxima = []
    for k in range(1, n_max + 1):
        center = k * revival_time
        sel = (t >= center - half) & (t <= center + half)
        if not sel.any():
            raise ValueError(f"no samples within window around {center:.3g}")
        maxima.append(series.values[sel].max())
    mean = float(series.values.mean())
    if mean == 0.0:
        raise ValueError("degenerate input: series mean is zero")
    return float(np.mean(maxima)) / mean
