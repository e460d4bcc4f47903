"""Moment evaluation by determinant-shift identities: the verification twin.

This engine never touches the closed-form product/sum expressions in
``closed_form``.  It builds every mixed moment from three primitives:

* multiplying the integrand by det(W) = XY - Z^2 rescales the expectation
  and advances alpha by one (:func:`det_shift_factor`);
* multiplying by det(I-W) = 1 - X - Y + det(W) advances beta by one
  (:func:`complement_shift_factor`);
* one power of Z^2 can be traded for one power of X
  (:func:`z_reduction_factor`), leaving the parameters unchanged.

Chaining these reductions down to the plain marginal E[X^m] reproduces the
closed forms; bit-identical agreement of the two engines in exact rational
mode is the core correctness check of this package.  Reductions are
implemented as loops (not self-recursion) so each per-step factor is
auditable and stack depth is never a concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .core import BetaParams, Scalar
from .closed_form import _ab, moment_marginal


@dataclass(frozen=True)
class ShiftFactor:
    """Scaling constant plus the parameter set the expectation shifts to."""

    value: Scalar
    shifted_params: BetaParams


def det_shift_factor(p: BetaParams) -> ShiftFactor:
    """Factor c with E_{a,b}[det(W) f] = c * E_{a+1,b}[f].

    c = alpha(alpha-1/2) / ((alpha+beta)(alpha+beta-1/2)); positive for all
    alpha, beta > 1/2.
    """
    a, b = _ab(p)
    half = p.half
    value = a * (a - half) / ((a + b) * (a + b - half))
    return ShiftFactor(value, p.shifted(dalpha=1))


def complement_shift_factor(p: BetaParams) -> ShiftFactor:
    """Factor c with E_{a,b}[det(I-W) f] = c * E_{a,b+1}[f].

    c = beta(beta-1/2) / ((alpha+beta)(alpha+beta-1/2)).
    """
    a, b = _ab(p)
    half = p.half
    value = b * (b - half) / ((a + b) * (a + b - half))
    return ShiftFactor(value, p.shifted(dbeta=1))


def marginal_mean_from_shifts(p: BetaParams) -> Scalar:
    """E[X] solved from the identity det(I-W) = 1 - X - Y + det(W).

    Taking expectations of both sides (with E[X] = E[Y] by exchange
    symmetry) gives a linear equation in E[X]:

        complement_factor = 1 - 2 E[X] + det_factor

    whose solution must equal alpha/(alpha+beta).
    """
    fa = det_shift_factor(p).value
    fb = complement_shift_factor(p).value
    return (1 + fa - fb) / 2


def z_reduction_factor(p: BetaParams, m: int, t: int) -> Scalar:
    """Factor c with E_{a,b}[Z^{2t} X^m] = c * E_{a,b}[Z^{2t-2} X^{m+1}], t >= 1.

    c = (t-1/2)(beta+t-1) / ((alpha+beta+t-3/2)(alpha+beta+2t+m-1));
    strictly inside (0, 1) for all valid parameters, so each reduction
    contracts.
    """
    if t < 1:
        raise ValueError(f"z_reduction_factor requires t >= 1, got t={t}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    a, b = _ab(p)
    half = p.half
    return ((t - half) * (b + t - 1)) / ((a + b + t - 3 * half) * (a + b + 2 * t + m - 1))


def moment_xz_by_reduction(p: BetaParams, m: int, t: int) -> Scalar:
    """E[X^m Z^{2t}] via t successive Z^2 -> X trades, then the marginal moment."""
    if m < 0 or t < 0:
        raise ValueError(f"m and t must be >= 0, got m={m}, t={t}")
    a, _ = _ab(p)
    factor = a - a + 1
    mm, tt = m, t
    while tt >= 1:
        factor *= z_reduction_factor(p, mm, tt)
        tt -= 1
        mm += 1
    return factor * moment_marginal(p, mm)


def moment_mixed_by_reduction(p: BetaParams, m: int, r: int, t: int) -> Scalar:
    """E[X^m Y^r Z^{2t}] for m >= r, by binomial expansion of Y^r.

    Writing XY = det(W) + Z^2 gives

        X^m Y^r Z^{2t} = X^{m-r} (det(W) + Z^2)^r Z^{2t}
                       = sum_i C(r,i) det(W)^{r-i} X^{m-r} Z^{2(t+i)}.

    Each det(W) power is peeled off with :func:`det_shift_factor` applied
    left to right (parameters advancing alpha, alpha+1, ...), and the
    remainder is finished by :func:`moment_xz_by_reduction`.
    """
    if m < 0 or r < 0 or t < 0:
        raise ValueError(f"exponents must be >= 0, got m={m}, r={r}, t={t}")
    if m < r:
        raise ValueError(f"moment_mixed_by_reduction requires m >= r, got m={m} < r={r}")
    a, _ = _ab(p)
    total = a - a
    for i in range(r + 1):
        factor = a - a + 1
        params = p
        for _ in range(r - i):
            shift = det_shift_factor(params)
            factor *= shift.value
            params = shift.shifted_params
        total += comb(r, i) * factor * moment_xz_by_reduction(params, m - r, t + i)
    return total
