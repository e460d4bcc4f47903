"""Random-variate generation for the 2x2 matrix Beta law, plus MC estimation.

Two constructions are provided:

* :class:`MatrixBetaSampler` draws S_a ~ Wishart(2 alpha), S_b ~ Wishart(2 beta)
  via Bartlett factors (chi-square diagonals, normal off-diagonal; fractional
  degrees of freedom drawn as gamma(shape=d/2, scale=2)), forms T = S_a + S_b
  with Cholesky T = L L^T and returns W = L^{-1} S_a L^{-T}.  Valid for all
  alpha, beta > 1/2.
* :class:`StiefelBlockSampler` draws an n x k standard-normal matrix,
  orthonormalizes its columns with the R-diagonal fixed positive (keeping
  the frame Haar-distributed) and returns the top-left 2x2 block of Q Q^T,
  which follows the matrix Beta law with (alpha, beta) = (k/2, (n-k)/2).

All randomness is drawn through a numpy Generator in a fixed order with a
fixed internal chunk size, so identical :class:`RngSpec` values reproduce
identical sample streams regardless of the kernel backend.  Samples failing
the positive-definiteness domain due to rounding are redrawn (deterministic,
bounded retries).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import matrix_beta_assemble, stiefel_blocks
from .core import BetaParams, MomentEstimate, MomentIndex, Sym2Matrix

#: internal drawing chunk; part of the stream definition, never change lightly
_CHUNK = 1 << 18

_MAX_RETRIES = 50


@dataclass(frozen=True)
class RngSpec:
    """Reproducible stream identity: (seed, stream_id) -> identical samples."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_id < 0:
            raise ValueError(f"stream_id must be >= 0, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream_id)))
        )


@dataclass(frozen=True)
class StiefelSpec:
    """Frame shape (n, k) for the projection-block construction."""

    n: int
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2 (alpha = k/2 needs margin above 1/2), got {self.k}")
        if self.n - self.k < 2:
            raise ValueError(
                f"n - k must be >= 2 (beta = (n-k)/2 needs margin above 1/2), got n={self.n}, k={self.k}"
            )

    @property
    def params(self) -> BetaParams:
        return BetaParams(Fraction(self.k, 2), Fraction(self.n - self.k, 2))


def sample_wishart2(dof: float, rng: np.random.Generator) -> np.ndarray:
    """One 2x2 Wishart(dof) draw, L L^T from the triangular construction.

    Requires dof > 1 so both chi-square degrees of freedom are positive;
    fractional dof is supported through the gamma representation.
    """
    if not dof > 1:
        raise ValueError(f"dof must be > 1, got {dof}")
    g1 = rng.gamma(dof / 2.0, 2.0)
    g2 = rng.gamma((dof - 1.0) / 2.0, 2.0)
    nrm = rng.standard_normal()
    l11 = math.sqrt(g1)
    return np.array([[g1, l11 * nrm], [l11 * nrm, nrm * nrm + g2]])


class MatrixBetaSampler:
    """Sampler for arbitrary parameters alpha, beta > 1/2."""

    def __init__(self, params: BetaParams):
        self.params = params
        self._shape_a = float(params.alpha)  # gamma shape for chi2(2*alpha)
        self._shape_b = float(params.beta)

    def _draw_chunk(self, size: int, rng: np.random.Generator):
        sa, sb = self._shape_a, self._shape_b
        ga11 = rng.gamma(sa, 2.0, size)
        ga22 = rng.gamma(sa - 0.5, 2.0, size)
        gan = rng.standard_normal(size)
        gb11 = rng.gamma(sb, 2.0, size)
        gb22 = rng.gamma(sb - 0.5, 2.0, size)
        gbn = rng.standard_normal(size)
        return matrix_beta_assemble(ga11, ga22, gan, gb11, gb22, gbn)

    def sample_batch(self, n: int, rng: np.random.Generator):
        """Arrays (x, y, z) of n draws."""
        return _batched(self._draw_chunk, n, rng)

    def sample(self, rng: np.random.Generator) -> Sym2Matrix:
        x, y, z = self.sample_batch(1, rng)
        return Sym2Matrix(float(x[0]), float(y[0]), float(z[0]))


class StiefelBlockSampler:
    """Sampler via 2x2 blocks of random orthogonal projections."""

    def __init__(self, spec: StiefelSpec):
        self.spec = spec
        self.params = spec.params

    def _draw_chunk(self, size: int, rng: np.random.Generator):
        g = rng.standard_normal((size, self.spec.n, self.spec.k))
        return stiefel_blocks(g)

    def sample_batch(self, n: int, rng: np.random.Generator):
        return _batched(self._draw_chunk, n, rng)

    def sample(self, rng: np.random.Generator) -> Sym2Matrix:
        x, y, z = self.sample_batch(1, rng)
        return Sym2Matrix(float(x[0]), float(y[0]), float(z[0]))


def _batched(draw_chunk, n: int, rng: np.random.Generator):
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    xs = np.empty(n)
    ys = np.empty(n)
    zs = np.empty(n)
    filled = 0
    while filled < n:
        size = min(_CHUNK, n - filled)
        x, y, z, ok = draw_chunk(size, rng)
        retries = 0
        while not ok.all():
            retries += 1
            if retries > _MAX_RETRIES:
                raise RuntimeError(
                    f"sampler failed to produce a domain-valid draw after {_MAX_RETRIES} retries"
                )
            bad = np.flatnonzero(~ok)
            xr, yr, zr, okr = draw_chunk(bad.size, rng)
            x[bad] = xr
            y[bad] = yr
            z[bad] = zr
            ok[bad] = okr
        xs[filled : filled + size] = x
        ys[filled : filled + size] = y
        zs[filled : filled + size] = z
        filled += size
    return xs, ys, zs


def sample_matrix_beta(p: BetaParams, rng: np.random.Generator) -> Sym2Matrix:
    """One draw of W = L^{-1} S_a L^{-T}; always inside the PD domain."""
    return MatrixBetaSampler(p).sample(rng)


def sample_stiefel_block(spec: StiefelSpec, rng: np.random.Generator) -> Sym2Matrix:
    """One top-left 2x2 block of Q Q^T for a Haar frame Q."""
    return StiefelBlockSampler(spec).sample(rng)


def monomial(x: np.ndarray, y: np.ndarray, z: np.ndarray, idx: MomentIndex) -> np.ndarray:
    """x^m y^r z^s elementwise (exact ones for the zero index)."""
    f = np.ones_like(x)
    for arr, e in ((x, idx.m), (y, idx.r), (z, idx.z_pow)):
        if e:
            f = f * arr**e
    return f


def estimate_from_samples(
    x: np.ndarray, y: np.ndarray, z: np.ndarray, idx: MomentIndex
) -> MomentEstimate:
    """Sample mean and standard error of the monomial over given draws."""
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 samples for a standard error, got {n}")
    f = monomial(x, y, z, idx)
    value = float(np.mean(f))
    std_error = float(np.std(f, ddof=1) / math.sqrt(n))
    return MomentEstimate(value, std_error, n, "monte_carlo")


def mc_estimate(sampler, idx: MomentIndex, n_samples: int, rng: np.random.Generator) -> MomentEstimate:
    """Monte Carlo estimate of E[X^m Y^r Z^s] using ``sampler.sample_batch``."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    x, y, z = sampler.sample_batch(n_samples, rng)
    return estimate_from_samples(x, y, z, idx)
