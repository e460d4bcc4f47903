import math
from fractions import Fraction as F

import numpy as np
import pytest

from matbeta import closed_form as cf
from matbeta import sampling as sp
from matbeta._backend import set_backend
from matbeta.core import BetaParams, MomentIndex, in_domain

P22 = BetaParams(F(2), F(2))


def _domain_ok(x, y, z):
    return bool(
        ((x > 0) & (y > 0) & (x * y - z * z > 0) & (x < 1) & ((1 - x) * (1 - y) - z * z > 0)).all()
    )


class TestRngSpec:
    def test_determinism(self):
        a = sp.RngSpec(7, 3).generator().standard_normal(8)
        b = sp.RngSpec(7, 3).generator().standard_normal(8)
        assert np.array_equal(a, b)

    def test_stream_separation(self):
        a = sp.RngSpec(7, 0).generator().standard_normal(8)
        b = sp.RngSpec(7, 1).generator().standard_normal(8)
        assert not np.array_equal(a, b)

    @pytest.mark.parametrize("seed,stream", [(-1, 0), (2**64, 0), (0, -1)])
    def test_validation(self, seed, stream):
        with pytest.raises(ValueError):
            sp.RngSpec(seed, stream)


class TestStiefelSpec:
    def test_params(self):
        assert sp.StiefelSpec(8, 4).params == P22

    @pytest.mark.parametrize("n,k", [(8, 1), (5, 4), (4, 3)])
    def test_invalid_frames_rejected(self, n, k):
        with pytest.raises(ValueError):
            sp.StiefelSpec(n, k)


class TestWishart2:
    def test_dof_rejected(self):
        rng = sp.RngSpec(0).generator()
        with pytest.raises(ValueError):
            sp.sample_wishart2(1.0, rng)

    def test_symmetric_pd(self):
        rng = sp.RngSpec(1).generator()
        for _ in range(200):
            w = sp.sample_wishart2(2.5, rng)
            assert w[0, 1] == w[1, 0]
            assert w[0, 0] > 0
            assert np.linalg.det(w) > 0

    def test_mean_is_dof_times_identity(self):
        rng = sp.RngSpec(2).generator()
        n = 200_000
        acc = np.zeros((2, 2))
        rows = np.empty((n, 3))
        for i in range(n):
            w = sp.sample_wishart2(4.0, rng)
            rows[i] = (w[0, 0], w[1, 1], w[0, 1])
        mean = rows.mean(axis=0)
        se = rows.std(axis=0, ddof=1) / math.sqrt(n)
        assert abs(mean[0] - 4.0) < 5 * se[0]
        assert abs(mean[1] - 4.0) < 5 * se[1]
        assert abs(mean[2]) < 5 * se[2]

    def test_fixed_seed_reproduces(self):
        w1 = [sp.sample_wishart2(3.0, sp.RngSpec(5).generator()) for _ in range(1)][0]
        w2 = [sp.sample_wishart2(3.0, sp.RngSpec(5).generator()) for _ in range(1)][0]
        assert np.array_equal(w1, w2)


class TestMatrixBetaSampler:
    def test_every_draw_in_domain(self):
        for params in (BetaParams(0.6, 0.75), BetaParams(2.0, 2.0), BetaParams(5.0, 1.0)):
            x, y, z = sp.MatrixBetaSampler(params).sample_batch(20_000, sp.RngSpec(3).generator())
            assert _domain_ok(x, y, z)

    def test_single_draw(self):
        w = sp.sample_matrix_beta(BetaParams(1.0, 1.0), sp.RngSpec(4).generator())
        assert in_domain(w)

    def test_moments_five_sigma(self):
        n = 200_000
        x, y, z = sp.MatrixBetaSampler(BetaParams(2.0, 2.0)).sample_batch(n, sp.RngSpec(5).generator())
        for idx, expected in [
            (MomentIndex(1, 0, 0), 0.5),
            (MomentIndex(0, 0, 2), 1.0 / 35.0),
            (MomentIndex(1, 1, 0), float(cf.moment(P22, MomentIndex(1, 1, 0)))),
        ]:
            est = sp.estimate_from_samples(x, y, z, idx)
            assert abs(est.value - expected) < 5 * est.std_error

    def test_batch_deterministic(self):
        s = sp.MatrixBetaSampler(BetaParams(2.0, 2.0))
        x1, _, _ = s.sample_batch(1000, sp.RngSpec(6).generator())
        x2, _, _ = s.sample_batch(1000, sp.RngSpec(6).generator())
        assert np.array_equal(x1, x2)

    def test_xy_moment_at_unit_params(self):
        est = sp.mc_estimate(
            sp.MatrixBetaSampler(BetaParams(1.0, 1.0)),
            MomentIndex(1, 1, 0),
            100_000,
            sp.RngSpec(16).generator(),
        )
        assert abs(est.value - 2.0 / 9.0) < 5 * est.std_error

    def test_near_boundary_parameters_unbiased(self):
        # at alpha = beta = 0.51 most of the mass lies closer to the
        # det(W) = 0 boundary than float cancellation resolves; rejecting
        # those samples (instead of snapping them onto a representable
        # boundary layer) would bias E[X] upward by ~1e-2
        from matbeta.verify import beta_cdf, ks_critical, ks_statistic

        n = 200_000
        x, y, z = sp.MatrixBetaSampler(BetaParams(0.51, 0.51)).sample_batch(
            n, sp.RngSpec(17).generator()
        )
        assert _domain_ok(x, y, z)
        est = sp.estimate_from_samples(x, y, z, MomentIndex(1, 0, 0))
        assert abs(est.value - 0.5) < 5 * est.std_error
        assert ks_statistic(x, beta_cdf(0.51, 0.51)) < ks_critical(n)
        det = x * y - z * z
        expected = float(cf.moment(BetaParams(F(51, 100), F(51, 100)), MomentIndex(1, 1, 0))) - float(
            cf.moment(BetaParams(F(51, 100), F(51, 100)), MomentIndex(0, 0, 2))
        )
        se = det.std(ddof=1) / math.sqrt(n)
        assert abs(det.mean() - expected) < 5 * se


class TestStiefelBlockSampler:
    def test_every_draw_in_domain(self):
        x, y, z = sp.StiefelBlockSampler(sp.StiefelSpec(8, 4)).sample_batch(
            20_000, sp.RngSpec(7).generator()
        )
        assert _domain_ok(x, y, z)

    def test_single_draw(self):
        w = sp.sample_stiefel_block(sp.StiefelSpec(6, 2), sp.RngSpec(8).generator())
        assert in_domain(w)

    def test_block_moments_match_beta_law(self):
        n = 200_000
        x, y, z = sp.StiefelBlockSampler(sp.StiefelSpec(8, 4)).sample_batch(
            n, sp.RngSpec(9).generator()
        )
        for idx in (MomentIndex(1, 0, 0), MomentIndex(2, 0, 0), MomentIndex(0, 0, 2)):
            est = sp.estimate_from_samples(x, y, z, idx)
            closed = float(cf.moment(P22, idx))
            assert abs(est.value - closed) < 5 * est.std_error

    def test_first_eight_x_moments_match_general_sampler(self):
        # the two constructions target the same law at (n, k) = (8, 4)
        n = 200_000
        xs, ys, zs = sp.StiefelBlockSampler(sp.StiefelSpec(8, 4)).sample_batch(
            n, sp.RngSpec(15, 0).generator()
        )
        xw, yw, zw = sp.MatrixBetaSampler(BetaParams(2.0, 2.0)).sample_batch(
            n, sp.RngSpec(15, 1).generator()
        )
        for m in range(1, 9):
            idx = MomentIndex(m, 0, 0)
            es = sp.estimate_from_samples(xs, ys, zs, idx)
            ew = sp.estimate_from_samples(xw, yw, zw, idx)
            closed = float(cf.moment(P22, idx))
            comb = math.hypot(es.std_error, ew.std_error)
            assert abs(es.value - ew.value) < 5 * comb
            assert abs(es.value - closed) < 5 * es.std_error
            assert abs(ew.value - closed) < 5 * ew.std_error


class TestMcEstimate:
    def test_constant_index_exact(self):
        est = sp.mc_estimate(
            sp.MatrixBetaSampler(BetaParams(2.0, 2.0)),
            MomentIndex(0, 0, 0),
            1000,
            sp.RngSpec(10).generator(),
        )
        assert est.value == 1.0
        assert est.std_error == 0.0
        assert est.method == "monte_carlo"

    def test_odd_power_near_zero(self):
        est = sp.mc_estimate(
            sp.MatrixBetaSampler(BetaParams(2.0, 2.0)),
            MomentIndex(1, 0, 1),
            50_000,
            sp.RngSpec(11).generator(),
        )
        assert abs(est.value) < 5 * est.std_error

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValueError):
            sp.mc_estimate(
                sp.MatrixBetaSampler(BetaParams(2.0, 2.0)),
                MomentIndex(0, 0, 0),
                1,
                sp.RngSpec(0).generator(),
            )

    def test_estimate_matches_manual(self):
        rng = sp.RngSpec(12).generator()
        x, y, z = sp.MatrixBetaSampler(BetaParams(2.0, 3.0)).sample_batch(5000, rng)
        est = sp.estimate_from_samples(x, y, z, MomentIndex(2, 1, 0))
        f = x**2 * y
        assert est.value == pytest.approx(f.mean())
        assert est.std_error == pytest.approx(f.std(ddof=1) / math.sqrt(f.size))


class TestResamplePath:
    def test_invalid_draws_are_replaced(self):
        # feed an assembly that marks every third sample bad on the first
        # pass and good on redraws; the batch must come back fully valid
        calls = []

        def draw_chunk(size, rng):
            calls.append(size)
            x = np.full(size, 0.5)
            y = np.full(size, 0.5)
            z = np.zeros(size)
            ok = np.ones(size, dtype=bool)
            if len(calls) == 1:
                ok[::3] = False
            return x, y, z, ok

        x, y, z = sp._batched(draw_chunk, 100, sp.RngSpec(0).generator())
        assert x.size == 100
        assert calls[0] == 100 and calls[1] == 34

    def test_retry_limit_aborts(self):
        def always_bad(size, rng):
            zeros = np.zeros(size)
            return zeros, zeros, zeros, np.zeros(size, dtype=bool)

        with pytest.raises(RuntimeError, match="retries"):
            sp._batched(always_bad, 10, sp.RngSpec(0).generator())

    def test_count_below_one_rejected(self):
        with pytest.raises(ValueError):
            sp.MatrixBetaSampler(BetaParams(2.0, 2.0)).sample_batch(0, sp.RngSpec(0).generator())


class TestBackendEquivalence:
    def test_matrix_beta_streams_identical(self, backend_guard):
        set_backend("numba")
        a = sp.MatrixBetaSampler(BetaParams(2.0, 2.0)).sample_batch(20_000, sp.RngSpec(13).generator())
        set_backend("numpy")
        b = sp.MatrixBetaSampler(BetaParams(2.0, 2.0)).sample_batch(20_000, sp.RngSpec(13).generator())
        for u, v in zip(a, b):
            np.testing.assert_allclose(u, v, rtol=0, atol=1e-14)

    def test_stiefel_streams_identical(self, backend_guard):
        set_backend("numba")
        a = sp.StiefelBlockSampler(sp.StiefelSpec(8, 4)).sample_batch(5_000, sp.RngSpec(14).generator())
        set_backend("numpy")
        b = sp.StiefelBlockSampler(sp.StiefelSpec(8, 4)).sample_batch(5_000, sp.RngSpec(14).generator())
        for u, v in zip(a, b):
            np.testing.assert_allclose(u, v, rtol=0, atol=1e-12)
