"""Hot numeric kernels, each with a numba @njit version and a numpy fallback.

The three loops that dominate runtime live here:

* quadrature panel sums (millions of density evaluations per grid pass);
* assembly of matrix-Beta samples from pre-drawn gamma/normal variates;
* per-sample QR orthonormalization for projection-block samples.

Randomness never enters this module: sampler kernels are deterministic
transforms of arrays drawn outside, so both backends consume identical
random streams.  Dispatch is by :func:`matbeta._backend.using_numba`.
"""

from __future__ import annotations

import numpy as np

from ._backend import HAVE_NUMBA, using_numba

if HAVE_NUMBA:
    from numba import njit, prange
else:  # pragma: no cover - numba is a hard dependency, kept importable without it
    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap

    prange = range


def pairwise_sum(a: np.ndarray) -> np.ndarray:
    """Deterministic halving-tree reduction over axis 0.

    The reduction order depends only on the leading shape, so repeated runs
    (and both backends, given identical inputs) reduce in the same order.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1:], dtype=np.float64)
    while a.shape[0] > 1:
        even = (a.shape[0] // 2) * 2
        s = a[0:even:2] + a[1:even:2]
        if a.shape[0] % 2:
            s = np.concatenate([s, a[even : even + 1]], axis=0)
        a = s
    return a[0]


def _pow_mode(exponent: float) -> tuple[int, int]:
    """(mode, halfsteps): mode 1 uses sqrt+integer powers when 2*e is a small int."""
    p2 = int(round(2.0 * exponent))
    if 0 <= p2 <= 16 and abs(2.0 * exponent - p2) < 1e-12:
        return 1, p2
    return 0, 0


# ---------------------------------------------------------------------------
# quadrature panel sums
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _quad_panel_sums_nb(x, y, base, u, wu, ea, eb, mode_a, p2a, mode_b, p2b, ms, rs, ss, q2, out):  # pragma: no cover - compiled
    npan = out.shape[0]
    nidx = ms.shape[0]
    nu = u.shape[0]
    mmax = 0
    rmax = 0
    smax = 0
    for ii in range(nidx):
        mmax = max(mmax, ms[ii])
        rmax = max(rmax, rs[ii])
        smax = max(smax, ss[ii])
    for pi in prange(npan):
        acc = np.zeros(nidx, dtype=np.float64)
        xp = np.empty(mmax + 1, dtype=np.float64)
        yp = np.empty(rmax + 1, dtype=np.float64)
        zsum = np.empty(smax + 1, dtype=np.float64)
        for local in range(q2):
            k = pi * q2 + local
            xx = x[k]
            yy = y[k]
            pw = xx * yy
            pc = (1.0 - xx) * (1.0 - yy)
            b2 = pw if pw < pc else pc
            b = np.sqrt(b2)
            w0 = base[k] * b
            xp[0] = 1.0
            for i in range(mmax):
                xp[i + 1] = xp[i] * xx
            yp[0] = 1.0
            for i in range(rmax):
                yp[i + 1] = yp[i] * yy
            # fold the u axis into per-point sums of w * z^s first; the
            # (m, r) monomials are constant over u
            for i in range(smax + 1):
                zsum[i] = 0.0
            for j in range(nu):
                z = u[j] * b
                z2 = z * z
                detw = pw - z2
                detc = pc - z2
                if detw < 0.0:
                    detw = 0.0
                if detc < 0.0:
                    detc = 0.0
                if mode_a == 1:
                    s = np.sqrt(detw)
                    da = 1.0
                    for _ in range(p2a):
                        da *= s
                else:
                    da = detw**ea
                if mode_b == 1:
                    s = np.sqrt(detc)
                    db = 1.0
                    for _ in range(p2b):
                        db *= s
                else:
                    db = detc**eb
                w = w0 * wu[j] * da * db
                zk = w
                zsum[0] += zk
                for i in range(smax):
                    zk *= z
                    zsum[i + 1] += zk
            for ii in range(nidx):
                acc[ii] += xp[ms[ii]] * yp[rs[ii]] * zsum[ss[ii]]
        for ii in range(nidx):
            out[pi, ii] = acc[ii]


def _np_pow(v: np.ndarray, exponent: float, mode: int, p2: int) -> np.ndarray:
    if mode == 1:
        s = np.sqrt(v)
        out = np.ones_like(v)
        for _ in range(p2):
            out *= s
        return out
    return v**exponent


def _quad_panel_sums_np(x, y, base, u, wu, ea, eb, mode_a, p2a, mode_b, p2b, ms, rs, ss, q2, out):
    npan = out.shape[0]
    b2 = np.minimum(x * y, (1.0 - x) * (1.0 - y))
    b = np.sqrt(b2)
    z = b[:, None] * u[None, :]
    z2 = z * z
    detw = np.maximum((x * y)[:, None] - z2, 0.0)
    detc = np.maximum(((1.0 - x) * (1.0 - y))[:, None] - z2, 0.0)
    w = (base * b)[:, None] * wu[None, :]
    w *= _np_pow(detw, ea, mode_a, p2a)
    w *= _np_pow(detc, eb, mode_b, p2b)
    # fold the u axis first: per-point sums of w * z^s
    zsum = [w.sum(axis=1)]
    zk = w
    for _ in range(int(ss.max(initial=0))):
        zk = zk * z
        zsum.append(zk.sum(axis=1))
    xp = [np.ones_like(x)]
    for _ in range(int(ms.max(initial=0))):
        xp.append(xp[-1] * x)
    yp = [np.ones_like(y)]
    for _ in range(int(rs.max(initial=0))):
        yp.append(yp[-1] * y)
    for ii in range(ms.shape[0]):
        contrib = zsum[ss[ii]] * xp[ms[ii]] * yp[rs[ii]]
        out[:, ii] = contrib.reshape(npan, q2).sum(axis=1)


def quad_panel_sums(x, y, base, u, wu, alpha, beta, ms, rs, ss, q2):
    """Per-panel sums of the weighted integrand for a block of 2-D panels.

    ``x, y, base`` are panel-major flats of q2 points per panel; ``u, wu``
    hold the full transformed third-axis rule.  Returns (n_panels, n_idx).
    """
    ea = alpha - 1.5
    eb = beta - 1.5
    mode_a, p2a = _pow_mode(ea)
    mode_b, p2b = _pow_mode(eb)
    npan = x.size // q2
    out = np.empty((npan, ms.shape[0]), dtype=np.float64)
    fn = _quad_panel_sums_nb if using_numba() else _quad_panel_sums_np
    fn(x, y, base, u, wu, ea, eb, mode_a, p2a, mode_b, p2b, ms, rs, ss, q2, out)
    return out


# ---------------------------------------------------------------------------
# matrix-Beta sample assembly
# ---------------------------------------------------------------------------


#: relative z^2 overshoot treated as rounding (construction guarantees the
#: exact value is inside; anything beyond this is a real failure)
_CLAMP_REL = 1e-10

#: relative margin the clamp leaves below the determinant boundary
_CLAMP_GAP = 1.0 - 2.0**-48


@njit(cache=True)
def _matrix_beta_assemble_nb(ga11, ga22, gan, gb11, gb22, gbn, x, y, z, ok):  # pragma: no cover - compiled
    n = ga11.shape[0]
    for i in range(n):
        la = np.sqrt(ga11[i])
        a11 = ga11[i]
        a12 = la * gan[i]
        a22 = gan[i] * gan[i] + ga22[i]
        lb = np.sqrt(gb11[i])
        b11 = gb11[i]
        b12 = lb * gbn[i]
        b22 = gbn[i] * gbn[i] + gb22[i]
        t11 = a11 + b11
        t12 = a12 + b12
        t22 = a22 + b22
        if t11 <= 0.0:
            ok[i] = False
            continue
        l11 = np.sqrt(t11)
        l21 = t12 / l11
        d = t22 - l21 * l21
        if d <= 0.0:
            ok[i] = False
            continue
        l22 = np.sqrt(d)
        m11 = a11 / l11
        m12 = a12 / l11
        m21 = (a12 - l21 * m11) / l22
        m22 = (a22 - l21 * m12) / l22
        w11 = m11 / l11
        w12 = m12 / l22 - m11 * l21 / (l11 * l22)
        w21 = m21 / l11
        w22 = m22 / l22 - m21 * l21 / (l11 * l22)
        xx = w11
        yy = w22
        zz = 0.5 * (w12 + w21)
        if not (0.0 < xx < 1.0 and 0.0 < yy < 1.0):
            x[i] = xx
            y[i] = yy
            z[i] = zz
            ok[i] = False
            continue
        # exact W, I-W are PD by construction; when the sample sits closer to
        # a determinant boundary than float cancellation can resolve, snap z
        # onto a representable boundary layer instead of rejecting (rejection
        # measurably biases moments for alpha or beta near 1/2)
        pw = xx * yy
        pc = (1.0 - xx) * (1.0 - yy)
        bound = pw if pw < pc else pc
        if zz * zz >= bound * _CLAMP_GAP:
            if zz * zz <= bound * (1.0 + _CLAMP_REL):
                mag = np.sqrt(bound * _CLAMP_GAP)
                zz = mag if zz >= 0.0 else -mag
            else:
                x[i] = xx
                y[i] = yy
                z[i] = zz
                ok[i] = False
                continue
        x[i] = xx
        y[i] = yy
        z[i] = zz
        ok[i] = pw - zz * zz > 0.0 and pc - zz * zz > 0.0


def _matrix_beta_assemble_np(ga11, ga22, gan, gb11, gb22, gbn, x, y, z, ok):
    la = np.sqrt(ga11)
    a11 = ga11
    a12 = la * gan
    a22 = gan * gan + ga22
    lb = np.sqrt(gb11)
    b11 = gb11
    b12 = lb * gbn
    b22 = gbn * gbn + gb22
    t11 = a11 + b11
    t12 = a12 + b12
    t22 = a22 + b22
    good = t11 > 0.0
    l11 = np.sqrt(np.where(good, t11, 1.0))
    l21 = t12 / l11
    d = t22 - l21 * l21
    good &= d > 0.0
    l22 = np.sqrt(np.where(good, d, 1.0))
    m11 = a11 / l11
    m12 = a12 / l11
    m21 = (a12 - l21 * m11) / l22
    m22 = (a22 - l21 * m12) / l22
    w11 = m11 / l11
    w12 = m12 / l22 - m11 * l21 / (l11 * l22)
    w21 = m21 / l11
    w22 = m22 / l22 - m21 * l21 / (l11 * l22)
    x[:] = w11
    y[:] = w22
    z[:] = 0.5 * (w12 + w21)
    good &= (x > 0.0) & (x < 1.0) & (y > 0.0) & (y < 1.0)
    # same rounding-layer snap as the numba path (see comment there)
    pw = x * y
    pc = (1.0 - x) * (1.0 - y)
    bound = np.minimum(pw, pc)
    z2 = z * z
    snap = good & (z2 >= bound * _CLAMP_GAP) & (z2 <= bound * (1.0 + _CLAMP_REL))
    z[snap] = np.copysign(np.sqrt(bound[snap] * _CLAMP_GAP), z[snap])
    ok[:] = good & (pw - z * z > 0.0) & (pc - z * z > 0.0)


def matrix_beta_assemble(ga11, ga22, gan, gb11, gb22, gbn):
    """Turn Bartlett-factor draws for the two Wisharts into (x, y, z, ok) arrays."""
    n = ga11.shape[0]
    x = np.empty(n)
    y = np.empty(n)
    z = np.empty(n)
    ok = np.empty(n, dtype=np.bool_)
    fn = _matrix_beta_assemble_nb if using_numba() else _matrix_beta_assemble_np
    fn(ga11, ga22, gan, gb11, gb22, gbn, x, y, z, ok)
    return x, y, z, ok


# ---------------------------------------------------------------------------
# projection blocks from Gaussian frames
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _stiefel_blocks_nb(g, x, y, z, ok):  # pragma: no cover - compiled
    ns, nrow, k = g.shape
    for s in prange(ns):
        q = g[s].copy()
        good = True
        for j in range(k):
            for i in range(j):
                dot = 0.0
                for row in range(nrow):
                    dot += q[row, i] * q[row, j]
                for row in range(nrow):
                    q[row, j] -= dot * q[row, i]
            nrm = 0.0
            for row in range(nrow):
                nrm += q[row, j] * q[row, j]
            nrm = np.sqrt(nrm)
            if nrm < 1e-150:
                good = False
                break
            inv = 1.0 / nrm
            for row in range(nrow):
                q[row, j] *= inv
        if not good:
            x[s] = 0.0
            y[s] = 0.0
            z[s] = 0.0
            ok[s] = False
            continue
        xx = 0.0
        yy = 0.0
        zz = 0.0
        for c in range(k):
            xx += q[0, c] * q[0, c]
            yy += q[1, c] * q[1, c]
            zz += q[0, c] * q[1, c]
        x[s] = xx
        y[s] = yy
        z[s] = zz
        ok[s] = (
            xx > 0.0
            and yy > 0.0
            and xx * yy - zz * zz > 0.0
            and xx < 1.0
            and (1.0 - xx) * (1.0 - yy) - zz * zz > 0.0
        )


def _stiefel_blocks_np(g, x, y, z, ok):
    q, r = np.linalg.qr(g)
    diag = np.einsum("sii->si", r)
    sign = np.where(diag >= 0.0, 1.0, -1.0)
    q = q * sign[:, None, :]
    good = np.abs(diag).min(axis=1) > 1e-150
    q0 = q[:, 0, :]
    q1 = q[:, 1, :]
    x[:] = np.einsum("sc,sc->s", q0, q0)
    y[:] = np.einsum("sc,sc->s", q1, q1)
    z[:] = np.einsum("sc,sc->s", q0, q1)
    ok[:] = (
        good
        & (x > 0.0)
        & (y > 0.0)
        & (x * y - z * z > 0.0)
        & (x < 1.0)
        & ((1.0 - x) * (1.0 - y) - z * z > 0.0)
    )


def stiefel_blocks(g):
    """Top-left 2x2 blocks of Q Q^T for a stack of Gaussian frames g (ns, n, k).

    Columns are orthonormalized with the R-diagonal fixed positive (the
    numba path's modified Gram-Schmidt yields that sign convention
    directly; the LAPACK path applies an explicit sign flip).
    """
    ns = g.shape[0]
    x = np.empty(ns)
    y = np.empty(ns)
    z = np.empty(ns)
    ok = np.empty(ns, dtype=np.bool_)
    fn = _stiefel_blocks_nb if using_numba() else _stiefel_blocks_np
    fn(g, x, y, z, ok)
    return x, y, z, ok
