"""Shared domain types and elementary combinatorial helpers.

The random object throughout is a symmetric 2x2 matrix

    W = [[X, Z],
         [Z, Y]]

constrained so that both W and I - W are positive definite, together with
distribution parameters (alpha, beta), each > 1/2.  All moment engines are
generic over the scalar type: exact rationals (``fractions.Fraction``, also
plain ``int``) give bit-exact arithmetic, ``float`` gives fast approximate
arithmetic.  Functions here never mix the two modes on their own; they
simply propagate whatever scalar type the caller supplies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int, float]

#: 1/2 as an exact rational; reused by the engines for exact-mode formulas.
HALF = Fraction(1, 2)


def is_exact_scalar(value: Scalar) -> bool:
    """True when ``value`` carries exact (rational) arithmetic."""
    return isinstance(value, (Fraction, int))


@dataclass(frozen=True)
class BetaParams:
    """Distribution parameters (alpha, beta), each required to be > 1/2."""

    alpha: Scalar
    beta: Scalar

    def __post_init__(self):
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if isinstance(v, bool) or not isinstance(v, (Fraction, int, float)):
                raise TypeError(f"{name} must be a Fraction, int or float, got {type(v).__name__}")
            if not v > HALF:
                raise ValueError(f"{name} must be > 1/2, got {v}")

    @property
    def is_exact(self) -> bool:
        return is_exact_scalar(self.alpha) and is_exact_scalar(self.beta)

    def as_float(self) -> "BetaParams":
        return BetaParams(float(self.alpha), float(self.beta))

    def shifted(self, dalpha: int = 0, dbeta: int = 0) -> "BetaParams":
        """Parameters with integer-shifted alpha and/or beta."""
        return BetaParams(self.alpha + dalpha, self.beta + dbeta)

    @property
    def half(self) -> Scalar:
        """1/2 in this parameter set's arithmetic mode."""
        return HALF if self.is_exact else 0.5


@dataclass(frozen=True)
class MomentIndex:
    """Exponents (m, r, z_pow) of the monomial X^m Y^r Z^z_pow.

    The raw Z exponent is stored so odd powers are representable; odd powers
    have moment zero by the Z -> -Z symmetry of the distribution.
    """

    m: int
    r: int
    z_pow: int

    def __post_init__(self):
        for name, v in (("m", self.m), ("r", self.r), ("z_pow", self.z_pow)):
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"{name} must be an int, got {type(v).__name__}")
            if v < 0:
                raise ValueError(f"{name} must be >= 0, got {v}")

    @property
    def z_is_odd(self) -> bool:
        return self.z_pow % 2 == 1

    @property
    def t(self) -> int:
        """Half the Z exponent; defined only for even z_pow."""
        if self.z_is_odd:
            raise ValueError(f"t is undefined for odd z_pow={self.z_pow}")
        return self.z_pow // 2


@dataclass(frozen=True)
class Sym2Matrix:
    """A sample point w = [[x, z], [z, y]]."""

    x: Scalar
    y: Scalar
    z: Scalar

    def in_domain(self) -> bool:
        return in_domain(self)


@dataclass(frozen=True)
class MomentEstimate:
    """A stochastic or quadrature moment value with its error metadata.

    ``std_error`` is a standard error for Monte Carlo results and a
    grid-comparison error estimate for quadrature results; deterministic
    exact results would carry 0.
    """

    value: float
    std_error: float
    n_samples_or_cells: int
    method: str

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")
        if self.n_samples_or_cells < 1:
            raise ValueError(f"n_samples_or_cells must be >= 1, got {self.n_samples_or_cells}")
        if self.method not in ("monte_carlo", "quadrature"):
            raise ValueError(f"method must be 'monte_carlo' or 'quadrature', got {self.method!r}")


def pochhammer(a: Scalar, n: int) -> Scalar:
    """Rising factorial: prod_{j=0}^{n-1} (a + j), with the empty product = 1.

    Every finite product appearing in the moment formulas routes through
    this helper, so it is kept exact for rational ``a``.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    result = a - a + 1  # 1 in the scalar type of `a`
    for j in range(n):
        result *= a + j
    return result


def odd_double_factorial(t: int) -> int:
    """(2t-1)!! = 1 * 3 * ... * (2t-1); equals 1 for t = 0 (and (-1)!! = 1)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    result = 1
    for j in range(1, t + 1):
        result *= 2 * j - 1
    return result


def in_domain(w: Sym2Matrix) -> bool:
    """True iff both w and I - w are positive definite.

    Tested through leading principal minors:
    x > 0, y > 0, xy - z^2 > 0, 1 - x > 0, (1-x)(1-y) - z^2 > 0.
    These imply 0 < x, y < 1 and z^2 < min(xy, (1-x)(1-y)) <= 1/4.
    """
    x, y, z = w.x, w.y, w.z
    return (
        x > 0
        and y > 0
        and x * y - z * z > 0
        and 1 - x > 0
        and (1 - x) * (1 - y) - z * z > 0
    )
