import numpy as np
import pytest

from pabeam.beamformers import (
    Method,
    MsmvConfig,
    beamform_output,
    das_weight,
    msmv_objective,
    msmv_weight,
    mv_weight,
    reweight_diagonal,
    sc_weight,
)
from pabeam.covariance import apply_dl
from pabeam.delays import SnapshotMatrix
from pabeam.errors import DimensionMismatch, NotPositiveDefinite


def snaps_from(columns, K=0):
    columns = np.asarray(columns, float)
    n_sub = columns.shape[1] // (2 * K + 1)
    return SnapshotMatrix(
        columns=columns,
        subarray_len=columns.shape[0],
        n_subarrays=n_sub,
        temporal_half_window=K,
    )


def random_spd(rng, dim):
    g = rng.standard_normal((dim, dim))
    return g @ g.T + dim * np.eye(dim)


class TestDas:
    def test_uniform(self):
        w = das_weight(4)
        np.testing.assert_allclose(w.values, 0.25)
        assert w.method is Method.DAS

    def test_invalid(self):
        with pytest.raises(ValueError):
            das_weight(0)


class TestMv:
    def test_identity_gives_uniform(self):
        w = mv_weight(np.eye(8))
        np.testing.assert_allclose(w.values, 1.0 / 8, atol=1e-12)

    def test_2x2_closed_form(self):
        # R^-1 1 = [0.4, 0.2], normalized -> [2/3, 1/3]
        w = mv_weight(np.array([[2.0, 1.0], [1.0, 3.0]]))
        np.testing.assert_allclose(w.values, [2.0 / 3.0, 1.0 / 3.0], atol=1e-12)

    def test_unit_sum_random(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            dim = int(rng.integers(2, 16))
            w = mv_weight(random_spd(rng, dim))
            assert abs(w.values.sum() - 1.0) <= 1e-9

    def test_scale_invariant(self):
        rng = np.random.default_rng(8)
        r = random_spd(rng, 6)
        np.testing.assert_allclose(
            mv_weight(7.5 * r).values, mv_weight(r).values, rtol=1e-10
        )

    def test_indefinite_raises(self):
        with pytest.raises(NotPositiveDefinite):
            mv_weight(np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestSparseCapon:
    def test_matches_mv(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            dim = int(rng.integers(2, 12))
            r = random_spd(rng, dim)
            for alpha in (0.1, 1.0, 10.0):
                wsc = sc_weight(r, alpha, n_iter=10)
                wmv = mv_weight(r)
                assert np.max(np.abs(wsc.values - wmv.values)) <= 1e-8

    def test_steer_count_irrelevant(self):
        rng = np.random.default_rng(2)
        r = random_spd(rng, 5)
        a = sc_weight(r, 1.0, 10, n_steer=1).values
        b = sc_weight(r, 1.0, 10, n_steer=16).values
        np.testing.assert_allclose(a, b, atol=1e-10)

    def test_alpha_zero(self):
        r = np.array([[2.0, 1.0], [1.0, 3.0]])
        np.testing.assert_allclose(
            sc_weight(r, 0.0, 10).values, mv_weight(r).values, atol=1e-14
        )


class TestReweightDiagonal:
    def test_hand_value(self):
        x = np.array([[1.0, 0.0], [0.0, 2.0]])
        w = np.array([0.5, 0.5])
        d = reweight_diagonal(x, w)
        np.testing.assert_allclose(d, [2.0, 1.0])  # outputs 0.5 and 1.0

    def test_clamp_floor(self):
        x = np.array([[1.0, 0.0], [0.0, 0.0]])
        w = np.array([1.0, 0.0])
        d = reweight_diagonal(x, w, epsilon_floor_rel=1e-6)
        assert d[0] == pytest.approx(1.0)
        assert d[1] == pytest.approx(1e6)  # clamped at 1e-6 * peak

    def test_all_zero_marker(self):
        x = np.zeros((2, 3))
        assert reweight_diagonal(x, np.array([0.3, 0.7])) is None

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            reweight_diagonal(np.zeros((3, 2)), np.ones(2))


class TestMsmv:
    def test_single_column_one_step(self):
        # R = I, x = e1, beta = 1: start [0.5, 0.5]; D = 1/|0.5| = 2,
        # A = I + 2 e1 e1^T = diag(3, 1), A^-1 1 = [1/3, 1] -> [0.25, 0.75]
        r = np.eye(2)
        snaps = snaps_from([[1.0], [0.0]])
        w = msmv_weight(r, snaps, MsmvConfig(beta=1.0, n_iter=1))
        np.testing.assert_allclose(w.values, [0.25, 0.75], atol=1e-12)
        assert w.iterations_run == 1

    def test_single_column_two_steps(self):
        # second step: D = 1/0.25 = 4, A = diag(5, 1) -> [1/6, 5/6]
        r = np.eye(2)
        snaps = snaps_from([[1.0], [0.0]])
        w = msmv_weight(r, snaps, MsmvConfig(beta=1.0, n_iter=2))
        np.testing.assert_allclose(w.values, [1.0 / 6.0, 5.0 / 6.0], atol=1e-12)

    def test_beta_zero_is_mv(self):
        rng = np.random.default_rng(31)
        r = random_spd(rng, 6)
        snaps = snaps_from(rng.standard_normal((6, 10)))
        w = msmv_weight(r, snaps, MsmvConfig(beta=0.0, n_iter=10))
        np.testing.assert_allclose(w.values, mv_weight(r).values, atol=1e-12)
        assert w.iterations_run == 0

    def test_zero_snapshots_is_mv(self):
        rng = np.random.default_rng(32)
        r = random_spd(rng, 4)
        snaps = snaps_from(np.zeros((4, 5)))
        w = msmv_weight(r, snaps, MsmvConfig(beta=1.0, n_iter=3))
        np.testing.assert_allclose(w.values, mv_weight(r).values, atol=1e-12)

    def test_unit_sum_every_iterate(self):
        rng = np.random.default_rng(77)
        for _ in range(50):
            dim = int(rng.integers(2, 10))
            r = random_spd(rng, dim)
            snaps = snaps_from(rng.standard_normal((dim, 12)))
            for n_iter in range(11):
                w = msmv_weight(r, snaps, MsmvConfig(n_iter=n_iter))
                assert abs(w.values.sum() - 1.0) <= 1e-9

    def test_objective_non_increase(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            dim = int(rng.integers(2, 10))
            r = random_spd(rng, dim)
            snaps = snaps_from(rng.standard_normal((dim, 15)))
            w0 = mv_weight(r).values
            w = msmv_weight(r, snaps, MsmvConfig(beta=1.0, n_iter=10)).values
            f0 = msmv_objective(r, snaps, w0, 1.0)
            f = msmv_objective(r, snaps, w, 1.0)
            assert f <= f0 + 1e-9

    def test_early_stop(self):
        # stationary problem: snapshots orthogonal to every unit-sum direction
        # change, so the iteration converges immediately
        rng = np.random.default_rng(13)
        r = random_spd(rng, 5)
        snaps = snaps_from(rng.standard_normal((5, 8)))
        full = msmv_weight(r, snaps, MsmvConfig(n_iter=50, early_stop=False))
        stopped = msmv_weight(
            r, snaps, MsmvConfig(n_iter=50, early_stop=True, early_stop_tol=1e-12)
        )
        assert stopped.iterations_run <= full.iterations_run
        np.testing.assert_allclose(stopped.values, full.values, atol=1e-8)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            msmv_weight(np.eye(3), snaps_from(np.ones((2, 4))))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MsmvConfig(beta=-1.0)
        with pytest.raises(ValueError):
            MsmvConfig(n_iter=-1)
        with pytest.raises(ValueError):
            MsmvConfig(epsilon_floor_rel=0.0)


class TestBeamformOutput:
    def test_hand_value(self):
        snaps = snaps_from([[1.0, 3.0], [2.0, 4.0]])
        w = das_weight(2)
        # column outputs 1.5 and 3.5, mean 2.5
        assert beamform_output(snaps, w) == pytest.approx(2.5)

    def test_center_block_only(self):
        # K=1: columns [off -1 | off 0 | off +1], one subarray each
        cols = np.array([[10.0, 1.0, 10.0], [10.0, 3.0, 10.0]])
        snaps = snaps_from(cols, K=1)
        out = beamform_output(snaps, das_weight(2))
        assert out == pytest.approx(2.0)  # only the offset-0 column counts

    def test_length_mismatch(self):
        snaps = snaps_from(np.ones((3, 2)))
        with pytest.raises(DimensionMismatch):
            beamform_output(snaps, das_weight(2))
