import numpy as np
import pytest

from spinbilliards.ensemble import (
    EnsembleConfig,
    derive_seed,
    realize,
    run_ensemble,
)
from spinbilliards.geometry import build_quarter_stadium, build_rectangle

SWAP_TIME = np.pi / 4


def small_config(**overrides) -> EnsembleConfig:
    defaults = dict(
        geometry=build_rectangle(7, 4),
        dt=SWAP_TIME,
        n_steps=40,
        n_realizations=3,
        base_seed=555,
    )
    defaults.update(overrides)
    return EnsembleConfig(**defaults)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(123, 5) == derive_seed(123, 5)

    def test_no_collisions_over_a_million_indices(self):
        seeds = {derive_seed(987654321, i) for i in range(1_000_000)}
        assert len(seeds) == 1_000_000

    @pytest.mark.parametrize("base", [0, 1, 2**63, 987654321])
    def test_not_a_pass_through(self, base):
        assert derive_seed(base, 0) != base

    def test_distinct_bases_give_distinct_streams(self):
        a = [derive_seed(1, i) for i in range(100)]
        b = [derive_seed(2, i) for i in range(100)]
        assert not set(a) & set(b)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            derive_seed(1, -1)


class TestRunEnsemble:
    def test_single_noise_free_realization_has_zero_stderr(self):
        cfg = small_config(n_realizations=1, p_defect=0.0, epsilon_max=0.0)
        result = run_ensemble(cfg)
        single = realize(cfg, 0)
        assert np.array_equal(result.cgf_coherent.mean, single["cgf_coherent"])
        assert np.array_equal(result.momentum.mean, single["momentum"])
        assert np.all(result.cgf_coherent.stderr == 0.0)
        assert np.all(result.acf.stderr == 0.0)

    def test_identical_realizations_when_disorder_off(self):
        result = run_ensemble(small_config(n_realizations=4))
        assert np.all(result.cgf_coherent.stderr == 0.0)
        assert np.all(result.cgf_incoherent.stderr == 0.0)
        assert np.all(result.momentum.stderr == 0.0)

    def test_worker_count_does_not_change_result(self):
        cfg = small_config(p_defect=0.15, epsilon_max=1e-4, n_realizations=4)
        serial = run_ensemble(cfg, workers=1)
        parallel = run_ensemble(cfg, workers=3)
        assert np.array_equal(serial.cgf_coherent.mean, parallel.cgf_coherent.mean)
        assert np.array_equal(serial.cgf_coherent.stderr, parallel.cgf_coherent.stderr)
        assert np.array_equal(serial.acf_of_mean, parallel.acf_of_mean)
        assert np.array_equal(serial.momentum.mean, parallel.momentum.mean)
        assert np.array_equal(serial.pooled_spacings, parallel.pooled_spacings)

    def test_disorder_produces_nonzero_stderr(self):
        cfg = small_config(p_defect=0.2, n_realizations=5)
        result = run_ensemble(cfg)
        assert result.cgf_coherent.stderr.max() > 0.0

    def test_ensemble_mean_incoherent_cgf_stays_in_unit_interval(self):
        cfg = small_config(p_defect=0.1, epsilon_max=1e-3, n_realizations=6)
        result = run_ensemble(cfg)
        assert result.cgf_incoherent.mean.min() >= 0.0
        assert result.cgf_incoherent.mean.max() <= 1.0 + 1e-12

    def test_snapshot_steps_select_recorded_times(self):
        cfg = small_config(snapshot_steps=(0, 10, 40))
        result = run_ensemble(cfg)
        assert result.snapshot_times == (
            0.0,
            pytest.approx(10 * SWAP_TIME),
            pytest.approx(40 * SWAP_TIME),
        )
        assert result.snapshots[0].mean[0, 0] == 1.0

    def test_failure_reports_realization_and_seed(self):
        # a 1x1 billiard yields a constant signal, whose autocorrelation
        # is undefined; the wrapper must attach realization context
        cfg = EnsembleConfig(
            geometry=build_rectangle(1, 1),
            dt=SWAP_TIME,
            n_steps=8,
            n_realizations=2,
            base_seed=9,
        )
        with pytest.raises(RuntimeError, match=r"realization 0 \(seed \d+\)"):
            run_ensemble(cfg)

    def test_realizations_validated(self):
        with pytest.raises(ValueError):
            small_config(n_realizations=0)

    def test_pooled_spacings_concatenate_per_realization(self):
        cfg = small_config(
            geometry=build_quarter_stadium(8, 8),
            p_defect=0.05,
            n_realizations=3,
            n_steps=20,
        )
        result = run_ensemble(cfg)
        sizes = [len(ev) for ev in result.eigenvalues]
        # each realization of ~101 sites contributes its own unfolded
        # spacings (levels minus trims minus one)
        assert result.pooled_spacings.size == sum(
            s - 2 * int(0.02 * s) - 1 for s in sizes
        )
