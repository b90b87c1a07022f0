"""Disorder ensembles: seeded realizations, averaging, standard errors.

Each realization draws its own defect configuration and noise history from
seeds derived deterministically from a base seed, so results are identical
for any worker count.  Aggregation is an index-ordered reduce.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .evolution import PropagationPlan, diagonalize, evolve_stroboscopic, initial_state
from .geometry import BilliardGeometry, DefectConfig, SiteCoord, apply_defects
from .hamiltonian import NoiseModel, build_hamiltonian
from .observables import (
    TimeSeries,
    autocorrelation,
    cgf_time_series,
    momentum_distribution,
    population_snapshot,
)
from .spectral_stats import unfold

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
# Salt indices far above any realistic realization count keep the defect
# and noise sub-streams disjoint from realization seed derivation.
_DEFECT_SALT = 1 << 40
_NOISE_SALT = (1 << 40) + 1


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: bijective xor-shift-multiply mixing on 64 bits."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base_seed: int, realization_index: int) -> int:
    """Seed for one realization: mix64(base + (index + 1) * golden gamma).

    Injective in the index for fixed base (distinct pre-mix values feed a
    bijection) and never a pass-through of the base seed.
    """
    if realization_index < 0:
        raise ValueError(f"realization index must be >= 0, got {realization_index}")
    return _mix64(base_seed + (realization_index + 1) * _GAMMA)


@dataclass(frozen=True)
class EnsembleConfig:
    """Everything one realization needs, plus the averaging parameters.

    snapshot_steps indexes into the recorded trajectory (after striding),
    not into raw propagation steps.
    """

    geometry: BilliardGeometry
    coupling: float = 1.0
    dt: float = np.pi / 4.0
    n_steps: int = 0
    record_stride: int = 1
    cgf_origin: SiteCoord = (0, 0)
    cgf_n: int = 3
    acf_mode: str = "coherent"
    snapshot_steps: tuple[int, ...] = ()
    p_defect: float = 0.0
    epsilon_max: float = 0.0
    n_realizations: int = 1
    base_seed: int = 0
    unfold_degree: int = 7

    def __post_init__(self) -> None:
        if self.n_realizations < 1:
            raise ValueError(
                f"n_realizations must be >= 1, got {self.n_realizations}"
            )


@dataclass(frozen=True, eq=False)
class Aggregate:
    """Pointwise mean and standard error over realizations."""

    mean: np.ndarray
    stderr: np.ndarray


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Disorder-averaged observables.

    ``acf`` aggregates the per-realization autocorrelations, while
    ``acf_of_mean`` is the autocorrelation of the averaged coherent signal,
    the quantity a plot of the averaged series would be correlated from.
    """

    n_realizations: int
    times: np.ndarray
    acf_lags: np.ndarray
    cgf_coherent: Aggregate
    cgf_incoherent: Aggregate
    acf: Aggregate
    acf_of_mean: np.ndarray
    momentum: Aggregate
    snapshots: tuple[Aggregate, ...]
    snapshot_times: tuple[float, ...]
    eigenvalues: tuple[np.ndarray, ...] = field(repr=False)
    pooled_spacings: np.ndarray = field(repr=False)


def realize(cfg: EnsembleConfig, r: int) -> dict[str, np.ndarray]:
    """Run one seeded realization and return its raw observables."""
    seed_r = derive_seed(cfg.base_seed, r)
    defect_seed = derive_seed(seed_r, _DEFECT_SALT)
    noise_seed = derive_seed(seed_r, _NOISE_SALT)

    g = cfg.geometry
    if cfg.p_defect > 0.0:
        g = apply_defects(
            g,
            DefectConfig(
                p_defect=cfg.p_defect,
                seed=defect_seed,
                protected_sites=(tuple(cfg.cgf_origin),),
            ),
        )
    h = build_hamiltonian(g, cfg.coupling)
    noise = NoiseModel.from_geometry(g, cfg.epsilon_max, noise_seed)
    plan = PropagationPlan(
        dt=cfg.dt,
        n_steps=cfg.n_steps,
        record_stride=cfg.record_stride,
        noise=noise,
    )
    psi0 = initial_state(g, cfg.cgf_origin)
    sd = diagonalize(h)
    traj = evolve_stroboscopic(h, plan, psi0, sd=sd)

    coherent = cgf_time_series(traj, g, cfg.cgf_origin, cfg.cgf_n, "coherent")
    incoherent = cgf_time_series(traj, g, cfg.cgf_origin, cfg.cgf_n, "incoherent")
    acf = autocorrelation(coherent if cfg.acf_mode == "coherent" else incoherent)
    momentum = momentum_distribution(traj.states[-1], g)
    snapshots = [
        population_snapshot(traj.states[k], g) for k in cfg.snapshot_steps
    ]
    spacings = unfold(sd.eigenvalues, poly_degree=cfg.unfold_degree).spacings

    return {
        "times": traj.times,
        "cgf_coherent": coherent.values,
        "cgf_incoherent": incoherent.values,
        "acf_lags": acf.times,
        "acf": acf.values,
        "momentum": momentum.magnitudes,
        "snapshots": np.asarray(snapshots) if snapshots else np.empty((0, g.ly, g.lx)),
        "eigenvalues": sd.eigenvalues,
        "spacings": spacings,
    }


def _aggregate(stack: np.ndarray) -> Aggregate:
    n = stack.shape[0]
    mean = stack.mean(axis=0)
    if n == 1:
        stderr = np.zeros_like(mean)
    else:
        stderr = stack.std(axis=0, ddof=1) / np.sqrt(n)
    return Aggregate(mean=mean, stderr=stderr)


def run_ensemble(cfg: EnsembleConfig, workers: int = 1) -> EnsembleResult:
    """Average cfg.n_realizations seeded realizations.

    Results are gathered by realization index, so the output is identical
    for any ``workers`` value.  A failing realization aborts the run with
    its index and seed attached.
    """
    indices = range(cfg.n_realizations)
    if workers > 1 and cfg.n_realizations > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_realize_checked, [cfg] * cfg.n_realizations, indices))
    else:
        raw = [_realize_checked(cfg, r) for r in indices]

    times = raw[0]["times"]
    acf_lags = raw[0]["acf_lags"]
    cgf_coherent = _aggregate(np.stack([x["cgf_coherent"] for x in raw]))
    cgf_incoherent = _aggregate(np.stack([x["cgf_incoherent"] for x in raw]))
    acf_source = cgf_coherent if cfg.acf_mode == "coherent" else cgf_incoherent
    result = EnsembleResult(
        n_realizations=cfg.n_realizations,
        times=times,
        acf_lags=acf_lags,
        cgf_coherent=cgf_coherent,
        cgf_incoherent=cgf_incoherent,
        acf=_aggregate(np.stack([x["acf"] for x in raw])),
        acf_of_mean=autocorrelation(
            TimeSeries(times=times, values=acf_source.mean)
        ).values,
        momentum=_aggregate(np.stack([x["momentum"] for x in raw])),
        snapshots=tuple(
            _aggregate(np.stack([x["snapshots"][s] for x in raw]))
            for s in range(len(cfg.snapshot_steps))
        ),
        snapshot_times=tuple(float(times[k]) for k in cfg.snapshot_steps),
        eigenvalues=tuple(x["eigenvalues"] for x in raw),
        pooled_spacings=np.concatenate([x["spacings"] for x in raw]),
    )
    return result


def _realize_checked(cfg: EnsembleConfig, r: int) -> dict[str, np.ndarray]:
    try:
        return realize(cfg, r)
    except Exception as exc:
        seed_r = derive_seed(cfg.base_seed, r)
        raise RuntimeError(
            f"realization {r} (seed {seed_r}) failed: {exc}"
        ) from exc
