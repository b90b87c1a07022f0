"""Single-excitation Hamiltonian assembly and stroboscopic gate noise.

The XX lattice restricted to one flipped spin is a hopping problem on the
occupied sites: each bond carries amplitude ``2 * coupling`` and the static
diagonal vanishes (the uniform transverse field is a sector constant and is
dropped as a global phase).

Gate noise adds a fluctuating diagonal.  With the convention
sigma_z |up> = +|up>, projecting the gradient term eps * (i + j) * sigma_z
onto the one-excitation sector leaves ``2 * eps * (i_m + j_m)`` on site m,
again up to a sector-constant phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .geometry import BilliardGeometry


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Real symmetric hopping matrix over the occupied sites."""

    n: int
    hopping: sparse.csr_matrix
    coupling: float

    def dense(self) -> np.ndarray:
        return self.hopping.toarray()


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Uniform-in-[0, epsilon_max] amplitude with per-site gradient i + j."""

    epsilon_max: float
    gradient: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.epsilon_max < 0:
            raise ValueError(f"epsilon_max must be >= 0, got {self.epsilon_max}")

    @classmethod
    def from_geometry(
        cls, g: BilliardGeometry, epsilon_max: float, seed: int
    ) -> "NoiseModel":
        gradient = g.coords.sum(axis=1).astype(np.int64)
        return cls(epsilon_max=epsilon_max, gradient=gradient, seed=seed)


def build_hamiltonian(g: BilliardGeometry, coupling: float = 1.0) -> Hamiltonian:
    """Hopping matrix with entry 2*coupling on every bond, zero diagonal."""
    n = g.n_sites
    if g.n_bonds:
        rows = np.concatenate([g.bonds[:, 0], g.bonds[:, 1]])
        cols = np.concatenate([g.bonds[:, 1], g.bonds[:, 0]])
        vals = np.full(2 * g.n_bonds, 2.0 * coupling)
        hopping = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    else:
        hopping = sparse.csr_matrix((n, n))
    return Hamiltonian(n=n, hopping=hopping, coupling=coupling)


def sample_noise_amplitude(nm: NoiseModel, rng: np.random.Generator) -> float:
    """Draw one amplitude uniformly from [0, epsilon_max], advancing rng."""
    return float(rng.uniform(0.0, nm.epsilon_max))


def noise_diagonal(nm: NoiseModel, eps_k: float) -> np.ndarray:
    """Sector-projected noise diagonal 2 * eps_k * (i_m + j_m)."""
    if eps_k < 0:
        raise ValueError(f"noise amplitude must be >= 0, got {eps_k}")
    return 2.0 * eps_k * nm.gradient.astype(np.float64)


def hamiltonian_triplets(h: Hamiltonian) -> str:
    """Coordinate dump "m m' value" per nonzero entry, sorted, for cross-checks."""
    coo = h.hopping.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [
        f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}"
        for k in order
    ]
    return "\n".join(lines) + ("\n" if lines else "")
