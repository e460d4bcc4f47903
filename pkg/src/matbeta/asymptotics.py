"""Large-frame decay of projection-block moments E[S11^m S12^{2t}] ~ C n^{-t}.

For S = Q Q^T with an n x k Haar frame Q at fixed ratio r = k/n, the block
moments are matrix-Beta moments at (alpha, beta) = (k/2, (n-k)/2).  This
module evaluates them exactly over a schedule of n values, fits the decay
exponent on a log-log scale, and extrapolates the leading coefficient
C(m, t, r) = lim n^t E[...].

Taking the n -> infinity limit of the product formula term by term gives

    C(m, t, r) = (2t-1)!! * (1-r)^t * r^(t+m)

which the Richardson-extrapolated table reproduces to high accuracy.  A
previously circulated closed form for the same constant,

    (2t-1)!!/2^t * r^t * (1-t)^(t+m),

is inconsistent with that limit (it vanishes identically at t = 1 and
carries a stray 2^t; the "(1-t)" reads as a typo for "(1-r)" with the
exponents also transposed).  Reports always show the empirical value and
both closed forms side by side rather than silently preferring one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .closed_form import moment_xz
from .core import BetaParams, odd_double_factorial


@dataclass(frozen=True)
class DecayStudy:
    """Exponents (m, t), frame ratio r = k/n, and the schedule of n values.

    Each n must give k = n * ratio as an even integer so alpha = k/2 and
    beta = (n-k)/2 are exact; the schedule must be strictly increasing and
    every implied frame must satisfy k >= 2 and n - k >= 2.
    """

    m: int
    t: int
    ratio: Fraction
    n_values: tuple[int, ...]

    def __post_init__(self):
        if self.m < 0 or self.t < 0:
            raise ValueError(f"m and t must be >= 0, got m={self.m}, t={self.t}")
        ratio = Fraction(self.ratio)
        object.__setattr__(self, "ratio", ratio)
        if not 0 < ratio < 1:
            raise ValueError(f"ratio must lie in (0, 1), got {ratio}")
        ns = tuple(int(n) for n in self.n_values)
        object.__setattr__(self, "n_values", ns)
        if len(ns) < 1:
            raise ValueError("n_values must be nonempty")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError(f"n_values must be strictly increasing, got {ns}")
        for n in ns:
            k = n * ratio
            if k.denominator != 1 or k.numerator % 2 != 0:
                raise ValueError(f"n * ratio must be an even integer, got n={n}, ratio={ratio}")
            kk = int(k)
            if kk < 2 or n - kk < 2:
                raise ValueError(f"frame (n={n}, k={kk}) violates k >= 2 and n - k >= 2")

    def k_of(self, n: int) -> int:
        return int(n * self.ratio)

    def params_of(self, n: int) -> BetaParams:
        k = self.k_of(n)
        return BetaParams(Fraction(k, 2), Fraction(n - k, 2))


def decay_table(study: DecayStudy) -> list[tuple[int, Fraction]]:
    """Exact moment values E[S11^m S12^{2t}] for each n in the schedule."""
    return [(n, moment_xz(study.params_of(n), study.m, study.t)) for n in study.n_values]


def fit_decay_exponent(table) -> float:
    """Least-squares slope of log(value) against log(n); needs >= 3 positive rows."""
    rows = list(table)
    if len(rows) < 3:
        raise ValueError(f"need at least 3 rows to fit a slope, got {len(rows)}")
    if any(v <= 0 for _, v in rows):
        raise ValueError("slope fit requires strictly positive values")
    logn = np.log([float(n) for n, _ in rows])
    logv = np.log([float(v) for _, v in rows])
    return float(np.polyfit(logn, logv, 1)[0])


def leading_coefficient_empirical(study: DecayStudy, table=None) -> float:
    """Limit estimate of value * n^t, Richardson-extrapolated over the two largest n.

    value * n^t = C + c/n + O(1/n^2), so with the two largest schedule
    entries n1 < n2 the 1/n term cancels in
    (n2 * a(n2) - n1 * a(n1)) / (n2 - n1).  Requires t >= 1 (there is no
    decay to extrapolate at t = 0) and at least two n values.
    """
    if study.t < 1:
        raise ValueError(f"leading coefficient requires t >= 1, got t={study.t}")
    rows = list(table) if table is not None else decay_table(study)
    if len(rows) < 2:
        raise ValueError(f"need at least 2 rows to extrapolate, got {len(rows)}")
    (n1, v1), (n2, v2) = rows[-2], rows[-1]
    a1 = Fraction(v1) * Fraction(n1) ** study.t
    a2 = Fraction(v2) * Fraction(n2) ** study.t
    return float((n2 * a2 - n1 * a1) / Fraction(n2 - n1))


def limit_coefficient(m: int, t: int, ratio: Fraction) -> Fraction:
    """Exact n -> infinity limit of n^t E[S11^m S12^{2t}] at fixed ratio r = k/n:

    (2t-1)!! * (1-r)^t * r^(t+m).
    """
    r = Fraction(ratio)
    return odd_double_factorial(t) * (1 - r) ** t * r ** (t + m)


def claimed_coefficient(m: int, t: int, ratio: Fraction) -> Fraction:
    """The previously circulated constant (2t-1)!!/2^t * r^t * (1-t)^(t+m).

    Reported for the record only; it disagrees with
    :func:`limit_coefficient` (and with the extrapolated tables), most
    visibly by vanishing at t = 1.
    """
    r = Fraction(ratio)
    return Fraction(odd_double_factorial(t), 2**t) * r**t * Fraction(1 - t) ** (t + m)


@dataclass(frozen=True)
class DecaySummary:
    """Everything a decay report prints: table, slope, and the three constants."""

    study: DecayStudy
    table: tuple
    slope: float
    empirical_coefficient: float | None
    limit_coefficient: Fraction | None
    claimed_coefficient: Fraction | None


def decay_summary(study: DecayStudy) -> DecaySummary:
    table = decay_table(study)
    slope = fit_decay_exponent(table) if len(table) >= 3 else float("nan")
    if study.t >= 1:
        emp = leading_coefficient_empirical(study, table)
        lim = limit_coefficient(study.m, study.t, study.ratio)
        claimed = claimed_coefficient(study.m, study.t, study.ratio)
    else:
        emp = lim = claimed = None
    return DecaySummary(study, tuple(table), slope, emp, lim, claimed)
