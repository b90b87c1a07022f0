import numpy as np
import pytest

from spinbilliards.geometry import DefectConfig, apply_defects, build_rectangle
from spinbilliards.hamiltonian import (
    NoiseModel,
    build_hamiltonian,
    hamiltonian_triplets,
    noise_diagonal,
    sample_noise_amplitude,
)


def rectangle_spectrum(lx: int, ly: int, coupling: float = 1.0) -> np.ndarray:
    """Closed-form spectrum: sums of the two open-chain mode energies."""
    p = np.arange(1, lx + 1)
    q = np.arange(1, ly + 1)
    ex = 4 * coupling * np.cos(p * np.pi / (lx + 1))
    ey = 4 * coupling * np.cos(q * np.pi / (ly + 1))
    return np.sort((ex[:, None] + ey[None, :]).ravel())


class TestBuildHamiltonian:
    def test_two_site_chain_matrix(self):
        h = build_hamiltonian(build_rectangle(2, 1), 1.0)
        assert np.array_equal(h.dense(), [[0.0, 2.0], [2.0, 0.0]])
        assert np.allclose(np.sort(np.linalg.eigvalsh(h.dense())), [-2.0, 2.0])

    def test_single_site_is_zero_matrix(self):
        h = build_hamiltonian(build_rectangle(1, 1), 1.0)
        assert h.n == 1
        assert np.array_equal(h.dense(), [[0.0]])

    def test_rectangle_spectrum_matches_closed_form(self):
        h = build_hamiltonian(build_rectangle(30, 20), 1.0)
        eigenvalues = np.linalg.eigvalsh(h.dense())
        assert np.abs(eigenvalues - rectangle_spectrum(30, 20)).max() < 1e-10

    @pytest.mark.parametrize("coupling", [1.0, 0.5, 2.3])
    def test_entries_are_twice_coupling_on_bonds(self, coupling):
        g = build_rectangle(4, 3)
        h = build_hamiltonian(g, coupling)
        dense = h.dense()
        assert np.array_equal(dense, dense.T)
        for a, b in g.bonds:
            assert dense[a, b] == 2.0 * coupling
        assert np.count_nonzero(dense) == 2 * g.n_bonds
        assert np.all(np.diag(dense) == 0.0)

    def test_spectral_radius_within_gershgorin_bound(self):
        coupling = 1.7
        h = build_hamiltonian(build_rectangle(9, 7), coupling)
        assert np.abs(np.linalg.eigvalsh(h.dense())).max() <= 8 * coupling + 1e-12

    def test_defects_do_not_touch_surviving_entries(self):
        g = build_rectangle(6, 5)
        h = build_hamiltonian(g, 1.0).dense()
        gd = apply_defects(g, DefectConfig(0.3, 11))
        hd = build_hamiltonian(gd, 1.0).dense()
        for (i1, j1), m1 in gd.index_of.items():
            for (i2, j2), m2 in gd.index_of.items():
                old = h[g.index_of[(i1, j1)], g.index_of[(i2, j2)]]
                assert hd[m1, m2] == old


class TestNoise:
    def test_zero_amplitude_bound_always_zero(self):
        nm = NoiseModel.from_geometry(build_rectangle(3, 3), 0.0, 5)
        rng = np.random.default_rng(5)
        assert all(sample_noise_amplitude(nm, rng) == 0.0 for _ in range(100))

    def test_sample_mean_matches_uniform_moments(self):
        eps_max = 1e-5
        nm = NoiseModel.from_geometry(build_rectangle(2, 2), eps_max, 0)
        rng = np.random.default_rng(2024)
        draws = np.array([sample_noise_amplitude(nm, rng) for _ in range(1_000_000)])
        sigma_mean = (eps_max / np.sqrt(12)) / np.sqrt(draws.size)
        assert abs(draws.mean() - eps_max / 2) < 3 * sigma_mean
        assert draws.min() >= 0.0 and draws.max() <= eps_max

    def test_identical_seeds_identical_streams(self):
        nm = NoiseModel.from_geometry(build_rectangle(2, 2), 1e-3, 9)
        a = [sample_noise_amplitude(nm, np.random.default_rng(nm.seed)) for _ in range(1)]
        b = [sample_noise_amplitude(nm, np.random.default_rng(nm.seed)) for _ in range(1)]
        rng1, rng2 = np.random.default_rng(9), np.random.default_rng(9)
        stream1 = [sample_noise_amplitude(nm, rng1) for _ in range(50)]
        stream2 = [sample_noise_amplitude(nm, rng2) for _ in range(50)]
        assert stream1 == stream2
        assert a == b

    def test_diagonal_zero_amplitude(self):
        g = build_rectangle(4, 4)
        nm = NoiseModel.from_geometry(g, 1e-5, 0)
        assert np.array_equal(noise_diagonal(nm, 0.0), np.zeros(g.n_sites))

    def test_diagonal_vanishes_at_origin(self):
        g = build_rectangle(5, 5)
        nm = NoiseModel.from_geometry(g, 1e-5, 0)
        d = noise_diagonal(nm, 1e-5)
        assert d[g.index_of[(0, 0)]] == 0.0

    def test_diagonal_value_from_gradient(self):
        # sector projection doubles the gradient: site (3, 4) at
        # eps = 1e-5 carries 2 * 1e-5 * 7 = 1.4e-4
        g = build_rectangle(5, 5)
        nm = NoiseModel.from_geometry(g, 1e-5, 0)
        d = noise_diagonal(nm, 1e-5)
        assert d[g.index_of[(3, 4)]] == pytest.approx(1.4e-4, rel=1e-12)

    def test_negative_amplitude_rejected(self):
        nm = NoiseModel.from_geometry(build_rectangle(2, 2), 1e-5, 0)
        with pytest.raises(ValueError):
            noise_diagonal(nm, -1.0)
        with pytest.raises(ValueError):
            NoiseModel.from_geometry(build_rectangle(2, 2), -1e-5, 0)


class TestTripletDump:
    def test_sorted_coordinate_lines(self):
        g = build_rectangle(2, 1)
        text = hamiltonian_triplets(build_hamiltonian(g, 1.0))
        assert text.splitlines() == ["0 1 2.0", "1 0 2.0"]

    def test_round_trips_matrix(self):
        g = build_rectangle(3, 2)
        h = build_hamiltonian(g, 0.75)
        dense = np.zeros((h.n, h.n))
        for line in hamiltonian_triplets(h).splitlines():
            a, b, v = line.split()
            dense[int(a), int(b)] = float(v)
        assert np.array_equal(dense, h.dense())
