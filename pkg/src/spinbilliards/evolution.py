"""Exact spectral propagation and split-step stroboscopic evolution.

The noise-free propagator is the exact spectral exponential.  With gate
noise the amplitude is resampled once per stroboscopic step and applied as
a Strang-split diagonal phase around the cached exact step, which keeps
every step unitary and the splitting error second order in dt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .geometry import BilliardGeometry, SiteCoord
from .hamiltonian import Hamiltonian, NoiseModel, noise_diagonal, sample_noise_amplitude


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class PropagationPlan:
    """Stroboscopic schedule: n_steps of duration dt, recording every stride."""

    dt: float
    n_steps: int
    record_stride: int = 1
    noise: NoiseModel | None = None

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states: times[k] holds the step time of states[k]."""

    times: np.ndarray
    states: np.ndarray

    def __len__(self) -> int:
        return self.times.shape[0]

    def __iter__(self):
        return ((float(t), psi) for t, psi in zip(self.times, self.states))


def initial_state(g: BilliardGeometry, site: SiteCoord) -> np.ndarray:
    """Unit amplitude on one occupied site, zero elsewhere."""
    key = (int(site[0]), int(site[1]))
    if key not in g.index_of:
        raise ValueError(f"site {key} is not occupied")
    psi = np.zeros(g.n_sites, dtype=np.complex128)
    psi[g.index_of[key]] = 1.0
    return psi


def diagonalize(h: Hamiltonian) -> SpectralDecomposition:
    """Full symmetric eigendecomposition of the densified hopping matrix."""
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(h.dense())
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise scipy.linalg.LinAlgError(
            f"eigendecomposition failed for n={h.n}: {exc}"
        ) from exc
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def evolve_spectral(
    sd: SpectralDecomposition, psi0: np.ndarray, t: float
) -> np.ndarray:
    """psi(t) = V exp(-i E t) V^T psi0."""
    if psi0.shape[0] != sd.eigenvalues.shape[0]:
        raise ValueError(
            f"state has dimension {psi0.shape[0]}, "
            f"decomposition has {sd.eigenvalues.shape[0]}"
        )
    phases = np.exp(-1j * sd.eigenvalues * t)
    return sd.eigenvectors @ (phases * (sd.eigenvectors.T @ psi0))


def step_propagator(sd: SpectralDecomposition, dt: float) -> np.ndarray:
    """Dense unitary exp(-i H dt) built from the spectral decomposition."""
    return (sd.eigenvectors * np.exp(-1j * sd.eigenvalues * dt)) @ sd.eigenvectors.T


def split_step_evolve(
    sd: SpectralDecomposition,
    psi0: np.ndarray,
    dt: float,
    eps_values: np.ndarray,
    gradient: np.ndarray,
) -> np.ndarray:
    """Apply one Strang step D(e, dt/2) U0(dt) D(e, dt/2) per entry of eps_values.

    The diagonal phase uses the sector-projected noise 2 * e * gradient.
    Useful for driving the splitting with a frozen amplitude schedule.
    """
    u0 = step_propagator(sd, dt)
    psi = psi0
    for eps in eps_values:
        half = np.exp(-0.5j * dt * 2.0 * float(eps) * gradient)
        psi = half * (u0 @ (half * psi))
    return psi


def evolve_stroboscopic(
    h: Hamiltonian,
    plan: PropagationPlan,
    psi0: np.ndarray,
    sd: SpectralDecomposition | None = None,
) -> Trajectory:
    """Propagate psi0 step by step, resampling the noise amplitude per step.

    The initial state is always recorded at t = 0; afterwards states are
    recorded every plan.record_stride steps.  Without noise the product of
    exact steps matches evolve_spectral at the same total time.  Pass a
    precomputed decomposition to skip the internal diagonalization.
    """
    if psi0.shape[0] != h.n:
        raise ValueError(f"state has dimension {psi0.shape[0]}, H has {h.n}")
    if sd is None:
        sd = diagonalize(h)
    u0 = step_propagator(sd, plan.dt)

    noise = plan.noise
    rng = np.random.default_rng(noise.seed) if noise is not None else None

    times = [0.0]
    states = [psi0.copy()]
    psi = psi0
    for k in range(plan.n_steps):
        if noise is not None:
            eps_k = sample_noise_amplitude(noise, rng)
            half = np.exp(-0.5j * plan.dt * noise_diagonal(noise, eps_k))
            psi = half * (u0 @ (half * psi))
        else:
            psi = u0 @ psi
        if (k + 1) % plan.record_stride == 0:
            times.append((k + 1) * plan.dt)
            states.append(psi.copy())
    return Trajectory(times=np.asarray(times), states=np.asarray(states))


def characteristic_times(
    g: BilliardGeometry, coupling: float = 1.0
) -> tuple[float, float]:
    """(swap time, revival time) = (pi/(4 coupling), 2 L * swap time).

    L is the larger bounding-box dimension.  The revival time is a
    convention with proportionality constant 1; revival detection scans a
    window around its multiples instead of trusting it exactly.
    """
    if coupling <= 0:
        raise ValueError(f"coupling must be positive, got {coupling}")
    t_swap = np.pi / (4.0 * coupling)
    length = max(g.lx, g.ly)
    return t_swap, 2.0 * length * t_swap


def trajectory_to_csv(traj: Trajectory) -> str:
    """Full trajectory as CSV: t, re_0, im_0, ..., re_{n-1}, im_{n-1}."""
    n = traj.states.shape[1]
    header = ["t"]
    for m in range(n):
        header += [f"re_{m}", f"im_{m}"]
    lines = [",".join(header)]
    for t, psi in traj:
        cells = [repr(float(t))]
        for amp in psi:
            cells += [repr(float(amp.real)), repr(float(amp.imag))]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
