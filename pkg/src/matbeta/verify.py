"""Verification suites: cross-engine exactness, quadrature oracle, MC oracle.

Each suite returns a list of :class:`Check` records (one per identity
tested) that the CLI renders as CSV/JSON and the test suite asserts on.
Monte Carlo checks use 5-standard-error acceptance margins so the false
failure probability stays negligible across the whole suite; all draws are
keyed by (seed, fixed stream id) and are therefore byte-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.special import betainc

from . import closed_form as cf
from . import recursion as rec
from .core import BetaParams, MomentIndex
from .quadrature import QuadratureSpec, quad_moments
from .sampling import MatrixBetaSampler, RngSpec, StiefelBlockSampler, StiefelSpec, estimate_from_samples, monomial

#: default parameter grid for the exact suite (covers the half-integer and
#: near-boundary cases: 3/4 exercises alpha - 1/2 = 1/4 < 1)
EXACT_GRID = (Fraction(3, 4), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(7, 2))

#: default parameter values for the quadrature suite (oracle precondition >= 2)
QUAD_GRID = (Fraction(2), Fraction(5, 2), Fraction(3))

KS_P_VALUE = 0.001


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    detail: str
    value_a: str
    value_b: str
    margin: str
    tol: str
    passed: bool


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# ---------------------------------------------------------------------------
# exact cross-engine suite
# ---------------------------------------------------------------------------


def exact_suite(max_order: int = 4, pairs=None) -> list[Check]:
    """Bit-exact agreement of the two engines over a rational parameter grid.

    Covers every ordered index m >= r (the m < r half is the same value by
    the dispatcher's exchange-symmetry swap), plus the marginal-mean
    identity and the specialization chain.
    """
    if pairs is None:
        pairs = list(product(EXACT_GRID, repeat=2))
    checks = []
    for a, b in pairs:
        p = BetaParams(a, b)
        mean = rec.marginal_mean_from_shifts(p)
        expect = Fraction(a, a + b)
        checks.append(
            Check(
                "exact",
                "marginal_mean_identity",
                f"alpha={a} beta={b}",
                _fmt(mean),
                _fmt(expect),
                _fmt(mean - expect),
                "bit-equal",
                mean == expect,
            )
        )
        for m in range(max_order + 1):
            for r in range(m + 1):
                for t in range(max_order + 1):
                    lhs = cf.moment_mixed(p, m, r, t)
                    rhs = rec.moment_mixed_by_reduction(p, m, r, t)
                    checks.append(
                        Check(
                            "exact",
                            "closed_vs_reduction",
                            f"alpha={a} beta={b} m={m} r={r} t={t}",
                            _fmt(lhs),
                            _fmt(rhs),
                            _fmt(lhs - rhs),
                            "bit-equal",
                            lhs == rhs,
                        )
                    )
        for m in range(max_order + 1):
            for t in range(max_order + 1):
                lhs = cf.moment_xz(p, m, t)
                rhs = cf.moment_mixed(p, m, 0, t)
                mg = cf.moment_marginal(p, m)
                chain_ok = lhs == rhs and cf.moment_xz(p, m, 0) == mg
                checks.append(
                    Check(
                        "exact",
                        "specialization_chain",
                        f"alpha={a} beta={b} m={m} t={t}",
                        _fmt(lhs),
                        _fmt(rhs),
                        _fmt(lhs - rhs),
                        "bit-equal",
                        chain_ok,
                    )
                )
    return checks


# ---------------------------------------------------------------------------
# quadrature oracle suite
# ---------------------------------------------------------------------------


def quadrature_suite(
    cells: int = 16,
    points: int = 3,
    pairs=None,
    max_mr: int = 3,
    max_t: int = 2,
) -> list[Check]:
    """Quadrature vs closed form within max(1e-8, reported error) per moment."""
    if pairs is None:
        pairs = list(product(QUAD_GRID, repeat=2))
    spec = QuadratureSpec(cells, points)
    indices = [
        MomentIndex(m, r, 2 * t)
        for m in range(max_mr + 1)
        for r in range(max_mr + 1)
        for t in range(max_t + 1)
    ]
    checks = []
    for a, b in pairs:
        p_exact = BetaParams(Fraction(a), Fraction(b))
        p_float = BetaParams(float(a), float(b))
        ests = quad_moments(p_float, indices, spec)
        for idx, est in zip(indices, ests):
            closed = float(cf.moment(p_exact, idx))
            tol = max(1e-8, est.std_error)
            diff = abs(est.value - closed)
            name = "normalization" if idx == MomentIndex(0, 0, 0) else "quad_vs_closed"
            ref = 1.0 if name == "normalization" else closed
            checks.append(
                Check(
                    "quadrature",
                    name,
                    f"alpha={a} beta={b} m={idx.m} r={idx.r} z={idx.z_pow} cells={cells}",
                    _fmt(est.value),
                    _fmt(ref),
                    _fmt(diff),
                    _fmt(tol),
                    diff <= tol,
                )
            )
    return checks


# ---------------------------------------------------------------------------
# Monte Carlo oracle suite
# ---------------------------------------------------------------------------


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance of a sample to a given CDF."""
    xs = np.sort(samples)
    n = xs.size
    f = cdf(xs)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - f), np.max(f - grid_lo)))


def ks_critical(n: int, p_value: float = KS_P_VALUE) -> float:
    """Asymptotic two-sided KS critical value: sqrt(-ln(p/2) / (2n))."""
    return math.sqrt(-math.log(p_value / 2.0) / (2.0 * n))


def beta_cdf(a: float, b: float):
    return lambda x: betainc(a, b, np.clip(x, 0.0, 1.0))


def _moment_checks(tag, x, y, z, p_exact, indices, checks, n_sigma=5.0):
    for idx in indices:
        est = estimate_from_samples(x, y, z, idx)
        closed = float(cf.moment(p_exact, idx))
        diff = abs(est.value - closed)
        sigmas = diff / est.std_error if est.std_error > 0 else (0.0 if diff == 0 else math.inf)
        checks.append(
            Check(
                "montecarlo",
                f"{tag}_moment",
                f"m={idx.m} r={idx.r} z={idx.z_pow} n={x.size}",
                _fmt(est.value),
                _fmt(closed),
                _fmt(sigmas),
                f"{n_sigma:g} sigma",
                sigmas <= n_sigma,
            )
        )


def montecarlo_suite(
    samples: int = 200_000,
    seed: int = 0,
    wishart_params: BetaParams = BetaParams(Fraction(2), Fraction(2)),
    stiefel_spec: StiefelSpec = StiefelSpec(8, 4),
    ks_params=(BetaParams(Fraction(1), Fraction(1)), BetaParams(Fraction(2), Fraction(3))),
    max_mr: int = 2,
    max_t: int = 1,
) -> list[Check]:
    """Sampler-vs-closed-form, shift-identity, block-equivalence and KS checks.

    Streams: 0 = general sampler at the base parameters, 1 = projection
    blocks, 2/3 = alpha- and beta-shifted draws for the determinant
    identities, 10+i = KS marginals.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    checks: list[Check] = []
    indices = [
        MomentIndex(m, r, 2 * t)
        for m in range(max_mr + 1)
        for r in range(max_mr + 1)
        for t in range(max_t + 1)
    ]
    pw = wishart_params
    pw_float = pw.as_float()
    xw, yw, zw = MatrixBetaSampler(pw_float).sample_batch(samples, RngSpec(seed, 0).generator())
    xs, ys, zs = StiefelBlockSampler(stiefel_spec).sample_batch(samples, RngSpec(seed, 1).generator())

    _moment_checks("wishart", xw, yw, zw, pw, indices, checks)
    _moment_checks("stiefel", xs, ys, zs, stiefel_spec.params, indices, checks)

    # mutual consistency of the two constructions (only meaningful when the
    # implied parameters coincide)
    if stiefel_spec.params == pw:
        for idx in indices:
            ew = estimate_from_samples(xw, yw, zw, idx)
            es = estimate_from_samples(xs, ys, zs, idx)
            diff = abs(ew.value - es.value)
            comb = math.hypot(ew.std_error, es.std_error)
            sigmas = diff / comb if comb > 0 else (0.0 if diff == 0 else math.inf)
            checks.append(
                Check(
                    "montecarlo",
                    "sampler_consistency",
                    f"m={idx.m} r={idx.r} z={idx.z_pow} n={samples}",
                    _fmt(ew.value),
                    _fmt(es.value),
                    _fmt(sigmas),
                    "5 sigma",
                    sigmas <= 5.0,
                )
            )

    # determinant shift identities: E[det(W) f] = c_a E_{a+1,b}[f],
    # E[det(I-W) f] = c_b E_{a,b+1}[f], f in {1, X, X^2, Z^2}
    fa = rec.det_shift_factor(pw)
    fb = rec.complement_shift_factor(pw)
    xa, ya, za = MatrixBetaSampler(fa.shifted_params.as_float()).sample_batch(
        samples, RngSpec(seed, 2).generator()
    )
    xb, yb, zb = MatrixBetaSampler(fb.shifted_params.as_float()).sample_batch(
        samples, RngSpec(seed, 3).generator()
    )
    f_indices = [MomentIndex(0, 0, 0), MomentIndex(1, 0, 0), MomentIndex(2, 0, 0), MomentIndex(0, 0, 2)]
    for kind, factor, (xr, yr, zr) in (
        ("det_shift", fa, (xa, ya, za)),
        ("complement_shift", fb, (xb, yb, zb)),
    ):
        if kind == "det_shift":
            mult = xw * yw - zw * zw
        else:
            mult = 1.0 - xw - yw + xw * yw - zw * zw
        c = float(factor.value)
        for idx in f_indices:
            lhs_arr = mult * monomial(xw, yw, zw, idx)
            lhs = float(np.mean(lhs_arr))
            lhs_se = float(np.std(lhs_arr, ddof=1) / math.sqrt(samples))
            er = estimate_from_samples(xr, yr, zr, idx)
            rhs = c * er.value
            comb = math.hypot(lhs_se, c * er.std_error)
            diff = abs(lhs - rhs)
            sigmas = diff / comb if comb > 0 else (0.0 if diff == 0 else math.inf)
            checks.append(
                Check(
                    "montecarlo",
                    f"{kind}_identity",
                    f"f=m{idx.m}z{idx.z_pow} n={samples}",
                    _fmt(lhs),
                    _fmt(rhs),
                    _fmt(sigmas),
                    "5 sigma",
                    sigmas <= 5.0,
                )
            )

    # marginal law: X ~ Beta(alpha, beta), KS test at the 0.1% level
    n_ks = min(samples, 100_000)
    for i, pk in enumerate(ks_params):
        xk, _, _ = MatrixBetaSampler(pk.as_float()).sample_batch(
            n_ks, RngSpec(seed, 10 + i).generator()
        )
        stat = ks_statistic(xk, beta_cdf(float(pk.alpha), float(pk.beta)))
        crit = ks_critical(n_ks)
        checks.append(
            Check(
                "montecarlo",
                "marginal_ks",
                f"alpha={pk.alpha} beta={pk.beta} n={n_ks}",
                _fmt(stat),
                _fmt(crit),
                _fmt(stat / crit),
                f"KS critical at p={KS_P_VALUE:g}",
                stat < crit,
            )
        )
    return checks


def run_suites(
    suite: str = "all",
    max_order: int = 4,
    cells: int = 16,
    samples: int = 200_000,
    seed: int = 0,
    pair=None,
) -> list[Check]:
    """Run the requested suite(s); ``pair`` restricts parameter grids to one (a, b)."""
    pairs = [pair] if pair is not None else None
    checks = []
    if suite in ("exact", "all"):
        checks += exact_suite(max_order=max_order, pairs=pairs)
    if suite in ("quadrature", "all"):
        checks += quadrature_suite(cells=cells, pairs=pairs)
    if suite in ("montecarlo", "all"):
        mc_kwargs = {}
        if pair is not None:
            mc_kwargs["wishart_params"] = BetaParams(Fraction(pair[0]), Fraction(pair[1]))
        checks += montecarlo_suite(samples=samples, seed=seed, **mc_kwargs)
    return checks
