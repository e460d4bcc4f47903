"""Closed-form mixed-moment formulas E[X^m Y^r Z^s] for the 2x2 matrix Beta law.

Everything here is a finite product / finite sum in the parameters, evaluated
directly:

  marginal   E[X^m]          = prod_{i<m} (alpha+i) / (alpha+beta+i)
  xz         E[X^m Z^{2t}]   = (2t-1)!!/2^t * prod_{i<t} (beta+i)/(alpha+beta-1/2+i)
                               * poch(alpha, t+m) / poch(alpha+beta, 2t+m)
  mixed      E[X^m Y^r Z^{2t}], m >= r:
                 (2t-1)!!/2^t * poch(beta,t)/poch(alpha+beta-1/2, t+r)
                 * poch(alpha, t+m)/poch(alpha+beta, 2t+m)
                 * sum_{i=0}^{r} C(r,i)/2^i * prod_{j=1}^{i}(2t-1+2j)
                   * poch(alpha-1/2, r-i) * poch(beta+t, i) / poch(alpha+beta+2t+m, i)

The dispatcher :func:`moment` handles odd Z powers (zero by symmetry) and the
m < r case (swap, by the X <-> Y exchange symmetry).  All functions are
generic over the scalar mode of ``BetaParams``: exact rationals in, exact
rational out; floats in, float out.  In float mode, very large exponent
totals are evaluated in log space to avoid overflow; exact mode always uses
direct products and is the correctness reference.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb

from .core import BetaParams, MomentIndex, Scalar, odd_double_factorial, pochhammer

#: Combined exponent size beyond which float mode switches to log-space
#: evaluation (direct float products of this module's ratio factors stay
#: bounded, but the (2t-1)!!/2^t prefactor alone overflows near t ~ 150).
LOG_SPACE_ORDER = 1000


def _ab(p: BetaParams) -> tuple[Scalar, Scalar]:
    """Parameters coerced so exact mode never hits int/int float division."""
    if p.is_exact:
        return Fraction(p.alpha), Fraction(p.beta)
    return p.alpha, p.beta


def moment_marginal(p: BetaParams, m: int) -> Scalar:
    """E[X^m]: the one-dimensional Beta(alpha, beta) moment of order m."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    a, b = _ab(p)
    result = a - a + 1
    for i in range(m):
        result *= (a + i) / (a + b + i)
    return result


def moment_xz(p: BetaParams, m: int, t: int) -> Scalar:
    """E[X^m Z^{2t}] by the direct product formula (collapses to the marginal at t=0)."""
    if m < 0 or t < 0:
        raise ValueError(f"m and t must be >= 0, got m={m}, t={t}")
    if not p.is_exact:
        if 2 * t + m > LOG_SPACE_ORDER:
            return math.exp(_log_moment_xz(float(p.alpha), float(p.beta), m, t))
        a, b = float(p.alpha), float(p.beta)
        # interleave the (2t-1)!!/2^t factors with denominators so every
        # bracket is <= 1: no intermediate can overflow for any order
        result = 1.0
        for i in range(t):
            result *= (i + 0.5) * (b + i) / ((a + b - 0.5 + i) * (a + b + t + m + i))
        for i in range(t + m):
            result *= (a + i) / (a + b + i)
        return result
    a, b = _ab(p)
    half = p.half
    result = Fraction(odd_double_factorial(t), 2**t)
    for i in range(t):
        result *= (b + i) / (a + b + i - half)
    for i in range(t + m):
        result *= (a + i) / (a + b + i)
    for i in range(t + m, 2 * t + m):
        result /= a + b + i
    return result


def moment_mixed(p: BetaParams, m: int, r: int, t: int) -> Scalar:
    """E[X^m Y^r Z^{2t}] for m >= r; rejects m < r (use :func:`moment` to auto-swap)."""
    if m < 0 or r < 0 or t < 0:
        raise ValueError(f"exponents must be >= 0, got m={m}, r={r}, t={t}")
    if m < r:
        raise ValueError(f"moment_mixed requires m >= r, got m={m} < r={r}")
    if not p.is_exact:
        if m + r + 2 * t > LOG_SPACE_ORDER:
            return math.exp(_log_moment_mixed(float(p.alpha), float(p.beta), m, r, t))
        value = _moment_mixed_float(float(p.alpha), float(p.beta), m, r, t)
        # rare large-order corners overflow or underflow the direct products;
        # the log-space route stays finite there
        if value == 0.0 or not math.isfinite(value):
            return math.exp(_log_moment_mixed(float(p.alpha), float(p.beta), m, r, t))
        return value
    a, b = _ab(p)
    half = p.half
    prefactor = Fraction(odd_double_factorial(t), 2**t)
    for i in range(t):
        prefactor *= b + i
    for j in range(t + r):
        prefactor /= a + b - half + j
    for i in range(t + m):
        prefactor *= (a + i) / (a + b + i)
    for i in range(t + m, 2 * t + m):
        prefactor /= a + b + i

    total = Fraction(0)
    for i in range(r + 1):
        term = Fraction(comb(r, i), 2**i)
        for j in range(1, i + 1):
            term *= 2 * t - 1 + 2 * j
        term *= pochhammer(a - half, r - i)
        term *= pochhammer(b + t, i)
        term /= pochhammer(a + b + 2 * t + m, i)
        total += term
    return prefactor * total


def _moment_mixed_float(a: float, b: float, m: int, r: int, t: int) -> float:
    prefactor = 1.0
    for i in range(t):
        prefactor *= (i + 0.5) * (b + i) / ((a + b - 0.5 + i) * (a + b + t + m + i))
    for j in range(t, t + r):
        prefactor /= a + b - 0.5 + j
    for i in range(t + m):
        prefactor *= (a + i) / (a + b + i)
    total = 0.0
    for i in range(r + 1):
        # prod_{j=1}^{i} (2t-1+2j)/2 paired with the growing denominator
        term = float(comb(r, i))
        for j in range(1, i + 1):
            term *= (t + j - 0.5) * (b + t + j - 1) / (a + b + 2 * t + m + j - 1)
        term *= pochhammer(a - 0.5, r - i)
        total += term
    return prefactor * total


def moment(p: BetaParams, idx: MomentIndex) -> Scalar:
    """E[X^m Y^r Z^s] for any index: 0 for odd s, swap-normalized otherwise."""
    a, _ = _ab(p)
    zero = a - a
    if idx.z_is_odd:
        return zero
    if idx.m == 0 and idx.r == 0 and idx.z_pow == 0:
        return zero + 1
    big, small = (idx.m, idx.r) if idx.m >= idx.r else (idx.r, idx.m)
    return moment_mixed(p, big, small, idx.t)


def _log_pochhammer(a: float, n: int) -> float:
    return math.lgamma(a + n) - math.lgamma(a)


def _log_odd_ddf(t: int) -> float:
    # (2t-1)!! = (2t)! / (2^t t!)
    return math.lgamma(2 * t + 1) - t * math.log(2.0) - math.lgamma(t + 1)


def _log_moment_xz(a: float, b: float, m: int, t: int) -> float:
    return (
        _log_odd_ddf(t)
        - t * math.log(2.0)
        + _log_pochhammer(b, t)
        - _log_pochhammer(a + b - 0.5, t)
        + _log_pochhammer(a, t + m)
        - _log_pochhammer(a + b, 2 * t + m)
    )


def _log_moment_mixed(a: float, b: float, m: int, r: int, t: int) -> float:
    log_pre = (
        _log_odd_ddf(t)
        - t * math.log(2.0)
        + _log_pochhammer(b, t)
        - _log_pochhammer(a + b - 0.5, t + r)
        + _log_pochhammer(a, t + m)
        - _log_pochhammer(a + b, 2 * t + m)
    )
    # log-sum-exp over the (all-positive) binomial terms;
    # prod_{j=1}^{i}(2t-1+2j) = 2^i poch(t+1/2, i) cancels the 1/2^i exactly
    logs = []
    for i in range(r + 1):
        logs.append(
            math.log(comb(r, i))
            + _log_pochhammer(t + 0.5, i)
            + _log_pochhammer(a - 0.5, r - i)
            + _log_pochhammer(b + t, i)
            - _log_pochhammer(a + b + 2 * t + m, i)
        )
    peak = max(logs)
    return log_pre + peak + math.log(math.fsum(math.exp(v - peak) for v in logs))
