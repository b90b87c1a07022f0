"""Lattice billiard geometries: site masks, index maps, bonds, defects.

A billiard is a set of occupied sites on the integer lattice inside a
bounding box of ``lx`` columns and ``ly`` rows.  Occupied sites are indexed
row-major, ascending in ``j`` then ``i``, so site index 0 is the lowest
occupied site in row ``j = 0``.  Bonds join occupied sites at Manhattan
distance 1; there is no wraparound (free boundaries).

Coordinates are ``(i, j)`` tuples with ``i`` the column and ``j`` the row.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

SiteCoord = tuple[int, int]


@dataclass(frozen=True, eq=False)
class BilliardGeometry:
    """Occupied-site mask with index maps and nearest-neighbor bonds.

    Attributes:
        shape_tag: one of "rectangle", "quarter_stadium", "custom".
        lx, ly: bounding box dimensions (columns, rows).
        occupied: bool array of shape (ly, lx); occupied[j, i].
        coords: int array (n_sites, 2); row m holds (i_m, j_m).
        index_of: dict mapping (i, j) -> site index m.
        bonds: int array (n_bonds, 2) with m < m', sorted lexicographically.
        adjacency: per-site tuple of neighbor indices.
    """

    shape_tag: str
    lx: int
    ly: int
    occupied: np.ndarray
    coords: np.ndarray
    index_of: dict[SiteCoord, int]
    bonds: np.ndarray
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n_sites(self) -> int:
        return self.coords.shape[0]

    @property
    def n_bonds(self) -> int:
        return self.bonds.shape[0]

    def coord_of(self, m: int) -> SiteCoord:
        """Inverse of index_of; raises for out-of-range indices."""
        if not 0 <= m < self.n_sites:
            raise ValueError(f"site index {m} out of range [0, {self.n_sites})")
        i, j = self.coords[m]
        return int(i), int(j)

    def __repr__(self) -> str:
        return (
            f"BilliardGeometry({self.shape_tag}, {self.lx}x{self.ly}, "
            f"{self.n_sites} sites, {self.n_bonds} bonds)"
        )


@dataclass(frozen=True)
class DefectConfig:
    """Random site removal: each non-protected site dropped with p_defect.

    The excitation corner (0, 0) is protected by default so the usual
    initial condition stays well-defined under disorder.
    """

    p_defect: float
    seed: int
    protected_sites: tuple[SiteCoord, ...] = ((0, 0),)

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_defect <= 1.0:
            raise ValueError(f"p_defect must lie in [0, 1], got {self.p_defect}")


def _geometry_from_mask(mask: np.ndarray, shape_tag: str) -> BilliardGeometry:
    mask = np.ascontiguousarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a nonempty 2D boolean grid")
    if not mask.any():
        raise ValueError("mask has no occupied site")
    ly, lx = mask.shape

    jj, ii = np.nonzero(mask)  # C order == row-major over (j, i)
    coords = np.column_stack([ii, jj]).astype(np.int64)
    index_of = {(int(i), int(j)): m for m, (i, j) in enumerate(coords)}

    site_index = np.full((ly, lx), -1, dtype=np.int64)
    site_index[jj, ii] = np.arange(coords.shape[0])

    pairs = []
    horiz = mask[:, :-1] & mask[:, 1:]
    if horiz.any():
        hj, hi = np.nonzero(horiz)
        pairs.append(np.column_stack([site_index[hj, hi], site_index[hj, hi + 1]]))
    vert = mask[:-1, :] & mask[1:, :]
    if vert.any():
        vj, vi = np.nonzero(vert)
        pairs.append(np.column_stack([site_index[vj, vi], site_index[vj + 1, vi]]))
    if pairs:
        bonds = np.concatenate(pairs, axis=0)
        order = np.lexsort((bonds[:, 1], bonds[:, 0]))
        bonds = bonds[order]
    else:
        bonds = np.empty((0, 2), dtype=np.int64)

    neighbor_lists: list[list[int]] = [[] for _ in range(coords.shape[0])]
    for a, b in bonds:
        neighbor_lists[a].append(int(b))
        neighbor_lists[b].append(int(a))
    adjacency = tuple(tuple(sorted(ns)) for ns in neighbor_lists)

    return BilliardGeometry(
        shape_tag=shape_tag,
        lx=lx,
        ly=ly,
        occupied=mask,
        coords=coords,
        index_of=index_of,
        bonds=bonds,
        adjacency=adjacency,
    )


def build_rectangle(lx: int, ly: int) -> BilliardGeometry:
    """Fully occupied lx-by-ly rectangle."""
    if lx < 1 or ly < 1:
        raise ValueError(f"rectangle dimensions must be positive, got {lx}x{ly}")
    return _geometry_from_mask(np.ones((ly, lx), dtype=bool), "rectangle")


def build_quarter_stadium(a: int, radius: int) -> BilliardGeometry:
    """Quarter stadium: straight edge of length ``a`` capped by a quarter disk.

    Occupied sites are {(i, j) : 0 <= j < radius, and (i < a or
    (i - a + 1)^2 + j^2 <= (radius - 1)^2)}.  The quarter disk is centered
    at (a - 1, 0) and boundary-inclusive, which keeps (0, 0) occupied and
    gives the staircase arc of the discretized stadium.
    """
    if a < 1 or radius < 1:
        raise ValueError(f"stadium parameters must be positive, got a={a}, R={radius}")
    lx = a + radius - 1
    ly = radius
    ii, jj = np.meshgrid(np.arange(lx), np.arange(ly))
    mask = (ii < a) | ((ii - a + 1) ** 2 + jj**2 <= (radius - 1) ** 2)
    return _geometry_from_mask(mask, "quarter_stadium")


def build_custom(mask: np.ndarray) -> BilliardGeometry:
    """Geometry over the true cells of an arbitrary boolean grid.

    Connectivity is not required; a disconnected occupied set is allowed
    but triggers a warning since excitations cannot cross the gap.
    """
    g = _geometry_from_mask(np.asarray(mask), "custom")
    if _n_components(g) > 1:
        warnings.warn(
            "custom billiard is disconnected; dynamics stays confined to "
            "the component of the initial site",
            stacklevel=2,
        )
    return g


def _n_components(g: BilliardGeometry) -> int:
    seen = np.zeros(g.n_sites, dtype=bool)
    components = 0
    for start in range(g.n_sites):
        if seen[start]:
            continue
        components += 1
        stack = [start]
        seen[start] = True
        while stack:
            m = stack.pop()
            for nb in g.adjacency[m]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
    return components


def apply_defects(g: BilliardGeometry, d: DefectConfig) -> BilliardGeometry:
    """Remove non-protected sites independently with probability p_defect.

    Sampling draws one uniform variate per occupied site in index order
    from a generator seeded with d.seed, so a given seed is reproducible
    bit-for-bit.  Site indices are recompacted afterwards.
    """
    for s in d.protected_sites:
        if tuple(s) not in g.index_of:
            raise ValueError(f"protected site {tuple(s)} is not occupied")
    rng = np.random.default_rng(d.seed)
    draws = rng.random(g.n_sites)
    removed = draws < d.p_defect
    for s in d.protected_sites:
        removed[g.index_of[tuple(s)]] = False

    mask = g.occupied.copy()
    gone = g.coords[removed]
    mask[gone[:, 1], gone[:, 0]] = False
    return _geometry_from_mask(mask, g.shape_tag)


def neighbors(g: BilliardGeometry, m: int) -> list[int]:
    """Occupied Manhattan-distance-1 neighbors of site m (at most 4)."""
    if not 0 <= m < g.n_sites:
        raise ValueError(f"site index {m} out of range [0, {g.n_sites})")
    return list(g.adjacency[m])


def mask_to_text(g: BilliardGeometry) -> str:
    """Serialize to the text grid format: header "Lx Ly", then Ly rows.

    Row k after the header is lattice row j = k; '#' marks an occupied
    cell and '.' an empty one.
    """
    lines = [f"{g.lx} {g.ly}"]
    for j in range(g.ly):
        lines.append("".join("#" if g.occupied[j, i] else "." for i in range(g.lx)))
    return "\n".join(lines) + "\n"


def mask_from_text(text: str) -> np.ndarray:
    """Parse the text grid format back into a boolean mask."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty mask file")
    try:
        lx, ly = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad mask header {lines[0]!r}, expected 'Lx Ly'") from exc
    if len(lines) - 1 != ly:
        raise ValueError(f"mask header promises {ly} rows, file has {len(lines) - 1}")
    mask = np.zeros((ly, lx), dtype=bool)
    for j, row in enumerate(lines[1:]):
        if len(row) != lx:
            raise ValueError(f"mask row {j} has length {len(row)}, expected {lx}")
        for i, ch in enumerate(row):
            if ch == "#":
                mask[j, i] = True
            elif ch != ".":
                raise ValueError(f"bad mask character {ch!r} at row {j}, column {i}")
    return mask
