"""Density evaluation and a deterministic tensor Gauss-Legendre moment oracle.

Density (for w = [[x, z], [z, y]] with w and I - w positive definite):

    p(w) = det(w)^(alpha - 3/2) * det(I - w)^(beta - 3/2) / B2(alpha, beta)

with the normalizing constant B2 built from the bivariate gamma function
Gamma2(a) = sqrt(pi) * Gamma(a) * Gamma(a - 1/2).

The integration domain is curved: z^2 < min(xy, (1-x)(1-y)).  It is mapped
to a box by

    x = sin^2(pi xi / 2),  y = sin^2(pi eta / 2),   xi, eta in (0, 1)
    z = u * sqrt(min(xy, (1-x)(1-y))),  u = sin(pi v / 2),  v in (-1, 1)

The sine substitutions absorb the square-root boundary behavior of the
integrand (exact for half-integer parameters), and the v rule is mirror
symmetric so odd Z powers cancel to roundoff.  The min() kink lies exactly
on the anti-diagonal xi + eta = 1; cells crossed by it are split into two
Duffy-mapped triangles so every panel sees a smooth integrand.

Accuracy contract: parameters are restricted to alpha, beta >= 2, keeping
the integrand exponents >= 1/2 (bounded, sqrt-type boundary at worst).
Each estimate is computed at the requested grid and at doubled cells; the
returned value is the finer result and the reported error is the difference
between the two plus a small roundoff allowance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from ._kernels import pairwise_sum, quad_panel_sums
from .core import BetaParams, MomentEstimate, MomentIndex, Sym2Matrix, in_domain

#: roundoff allowance added to the two-grid error estimate, relative to value
_ERR_FLOOR = 1e-13

#: panels per kernel block; bounds fallback-path temporary arrays
_PANEL_BLOCK = 1024


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid sizes for the tensor product rule (same on all three axes)."""

    cells_per_axis: int
    points_per_cell_axis: int = 4
    rule: str = "tensor_gauss_legendre"

    def __post_init__(self):
        if self.cells_per_axis < 1:
            raise ValueError(f"cells_per_axis must be >= 1, got {self.cells_per_axis}")
        if self.points_per_cell_axis < 1:
            raise ValueError(
                f"points_per_cell_axis must be >= 1, got {self.points_per_cell_axis}"
            )
        if self.rule != "tensor_gauss_legendre":
            raise ValueError(f"unknown rule {self.rule!r}")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.cells_per_axis, self.points_per_cell_axis, self.rule)


def log_multigamma2(a: float) -> float:
    """log Gamma2(a) = log(pi)/2 + lgamma(a) + lgamma(a - 1/2); requires a > 1/2."""
    a = float(a)
    if not a > 0.5:
        raise ValueError(f"log_multigamma2 requires a > 1/2, got {a}")
    return 0.5 * math.log(math.pi) + math.lgamma(a) + math.lgamma(a - 0.5)


def log_beta2(p: BetaParams) -> float:
    """log B2(alpha, beta) = log Gamma2(alpha) + log Gamma2(beta) - log Gamma2(alpha+beta)."""
    a, b = float(p.alpha), float(p.beta)
    return log_multigamma2(a) + log_multigamma2(b) - log_multigamma2(a + b)


def density(p: BetaParams, w: Sym2Matrix) -> float:
    """Probability density at w; 0 outside the positive-definite domain."""
    if not in_domain(w):
        return 0.0
    a, b = float(p.alpha), float(p.beta)
    x, y, z = float(w.x), float(w.y), float(w.z)
    detw = x * y - z * z
    detc = (1.0 - x) * (1.0 - y) - z * z
    return math.exp(
        -log_beta2(p) + (a - 1.5) * math.log(detw) + (b - 1.5) * math.log(detc)
    )


@lru_cache(maxsize=8)
def _xi_eta_panels(n_cells: int, q: int):
    """Panel-major node/weight flats for the 2-D (xi, eta) decomposition.

    Order: full square cells row-major, then for each anti-diagonal cell its
    lower (xi+eta < 1) and upper triangle.  Each panel contributes q*q points.
    Weights already include the sine-substitution Jacobians.
    """
    g, wg = leggauss(q)
    a01 = 0.5 * (g + 1.0)
    w01 = 0.5 * wg
    h = 1.0 / n_cells

    ii, jj = np.meshgrid(np.arange(n_cells), np.arange(n_cells), indexing="ij")
    keep = (ii + jj) != (n_cells - 1)
    isq = ii[keep].astype(np.float64)
    jsq = jj[keep].astype(np.float64)
    nsq = isq.size
    # (ncells, q, q) with xi varying along axis 1, eta along axis 2
    xi_sq = np.broadcast_to(((isq[:, None] + a01) * h)[:, :, None], (nsq, q, q))
    eta_sq = np.broadcast_to(((jsq[:, None] + a01) * h)[:, None, :], (nsq, q, q))
    w_sq = np.broadcast_to((np.outer(w01, w01) * h * h)[None], (nsq, q, q))

    # Duffy triangles on anti-diagonal cells: local coords p = a(1-b), q = b
    A, B = np.meshgrid(a01, a01, indexing="ij")
    p_lo = A * (1.0 - B)
    q_lo = B
    w_tri = np.outer(w01, w01) * (1.0 - B) * h * h
    idiag = np.arange(n_cells, dtype=np.float64)
    jdiag = (n_cells - 1) - idiag
    tri_x = []
    tri_y = []
    tri_w = []
    for p_loc, q_loc in ((p_lo, q_lo), (1.0 - p_lo, 1.0 - q_lo)):
        tri_x.append((idiag[:, None, None] + p_loc[None]) * h)
        tri_y.append((jdiag[:, None, None] + q_loc[None]) * h)
        tri_w.append(np.broadcast_to(w_tri[None], (n_cells, q, q)))
    # interleave lower/upper per diagonal cell to keep a stable panel order
    xi_tri = np.stack([tri_x[0], tri_x[1]], axis=1).reshape(-1, q, q)
    eta_tri = np.stack([tri_y[0], tri_y[1]], axis=1).reshape(-1, q, q)
    w_tri_all = np.stack([tri_w[0], tri_w[1]], axis=1).reshape(-1, q, q)

    xi = np.concatenate([xi_sq.reshape(-1), xi_tri.reshape(-1)])
    eta = np.concatenate([eta_sq.reshape(-1), eta_tri.reshape(-1)])
    w2 = np.concatenate([w_sq.reshape(-1), w_tri_all.reshape(-1)])

    x = np.sin(0.5 * np.pi * xi) ** 2
    y = np.sin(0.5 * np.pi * eta) ** 2
    base = w2 * (0.5 * np.pi * np.sin(np.pi * xi)) * (0.5 * np.pi * np.sin(np.pi * eta))
    for arr in (x, y, base):
        arr.setflags(write=False)
    return x, y, base


@lru_cache(maxsize=8)
def _u_axis(n_cells: int, q: int):
    """Composite GL rule in v mapped through u = sin(pi v / 2), mirror-exact."""
    g, wg = leggauss(q)
    h = 2.0 / n_cells
    v = (np.arange(n_cells)[:, None] * h - 1.0 + 0.5 * h * (g + 1.0)[None, :]).reshape(-1)
    wv = np.broadcast_to((0.5 * h * wg)[None], (n_cells, q)).reshape(-1).copy()
    u = np.sin(0.5 * np.pi * v)
    du = 0.5 * np.pi * np.cos(0.5 * np.pi * v)
    nh = u.size // 2
    u[:nh] = -u[::-1][:nh]
    du[:nh] = du[::-1][:nh]
    wv[:nh] = wv[::-1][:nh]
    wu = wv * du
    u.setflags(write=False)
    wu.setflags(write=False)
    return u, wu


def _unnormalized_integrals(alpha: float, beta: float, indices, n_cells: int, q: int):
    """Integrals of x^m y^r z^s times the unnormalized density, plus eval count."""
    x, y, base = _xi_eta_panels(n_cells, q)
    u, wu = _u_axis(n_cells, q)
    ms = np.array([i.m for i in indices], dtype=np.int64)
    rs = np.array([i.r for i in indices], dtype=np.int64)
    ss = np.array([i.z_pow for i in indices], dtype=np.int64)
    q2 = q * q
    npan = x.size // q2
    rows = []
    for start in range(0, npan, _PANEL_BLOCK):
        stop = min(start + _PANEL_BLOCK, npan)
        rows.append(
            quad_panel_sums(
                x[start * q2 : stop * q2],
                y[start * q2 : stop * q2],
                base[start * q2 : stop * q2],
                u,
                wu,
                alpha,
                beta,
                ms,
                rs,
                ss,
                q2,
            )
        )
    sums = pairwise_sum(np.concatenate(rows, axis=0))
    return sums, x.size * u.size


def _check_quad_params(p: BetaParams) -> tuple[float, float]:
    a, b = float(p.alpha), float(p.beta)
    if a < 2.0 or b < 2.0:
        raise ValueError(
            f"quadrature oracle requires alpha, beta >= 2 (integrand bounded), got ({a}, {b})"
        )
    return a, b


def quad_moments(p: BetaParams, indices, spec: QuadratureSpec) -> list[MomentEstimate]:
    """Moments for several indices in one pass over the grid (shared density work).

    Runs the requested grid and its doubled-cells refinement; returns the
    finer values with |coarse - fine| (plus a roundoff floor) as the error.
    """
    a, b = _check_quad_params(p)
    indices = list(indices)
    if not indices:
        return []
    q = spec.points_per_cell_axis
    norm = math.exp(log_beta2(p))
    coarse, _ = _unnormalized_integrals(a, b, indices, spec.cells_per_axis, q)
    fine, n_fine = _unnormalized_integrals(a, b, indices, 2 * spec.cells_per_axis, q)
    out = []
    for vc, vf in zip(coarse / norm, fine / norm):
        err = abs(vc - vf) + _ERR_FLOOR * (1.0 + abs(vf))
        out.append(MomentEstimate(float(vf), float(err), int(n_fine), "quadrature"))
    return out


def quad_moment(p: BetaParams, idx: MomentIndex, spec: QuadratureSpec) -> MomentEstimate:
    """Quadrature estimate of E[X^m Y^r Z^s] (see :func:`quad_moments`)."""
    return quad_moments(p, [idx], spec)[0]


def quad_normalization(p: BetaParams, spec: QuadratureSpec) -> MomentEstimate:
    """Integral of the unnormalized density divided by B2; must be ~= 1."""
    return quad_moment(p, MomentIndex(0, 0, 0), spec)
