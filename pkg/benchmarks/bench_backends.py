#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Covers the three hot paths: quadrature panel sums, matrix-Beta sample
assembly, and projection-block orthonormalization.  The backend is switched
at runtime (same switch the MATBETA_NUMBA env flag drives at import time).

    python benchmarks/bench_backends.py [--samples N] [--cells N] [--repeats R]
"""

import argparse
import time

from matbeta import (
    BetaParams,
    MatrixBetaSampler,
    MomentIndex,
    QuadratureSpec,
    RngSpec,
    StiefelBlockSampler,
    StiefelSpec,
    quad_moments,
    set_backend,
)
from matbeta._backend import HAVE_NUMBA


def bench(label, fn, repeats):
    best = min(_timed(fn) for _ in range(repeats))
    print(f"  {label:<28s} {best:8.3f} s")
    return best


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--cells", type=int, default=32)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    indices = [MomentIndex(m, r, 2 * t) for m in range(4) for r in range(4) for t in range(3)]
    spec = QuadratureSpec(args.cells, 3)
    p = BetaParams(2.0, 2.5)
    mb = MatrixBetaSampler(BetaParams(2.0, 2.0))
    st = StiefelBlockSampler(StiefelSpec(8, 4))

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    results = {}
    for backend in backends:
        set_backend(backend)
        print(f"backend: {backend}")
        if backend == "numba":
            # trigger JIT compilation outside the timed region
            quad_moments(p, indices[:1], QuadratureSpec(2, 2))
            mb.sample_batch(10, RngSpec(0).generator())
            st.sample_batch(10, RngSpec(0).generator())
        results[backend, "quad"] = bench(
            f"quadrature {args.cells} cells x48", lambda: quad_moments(p, indices, spec), args.repeats
        )
        results[backend, "mb"] = bench(
            f"matrix-beta {args.samples} draws",
            lambda: mb.sample_batch(args.samples, RngSpec(1).generator()),
            args.repeats,
        )
        results[backend, "st"] = bench(
            f"stiefel 8x4 {args.samples} draws",
            lambda: st.sample_batch(args.samples, RngSpec(2).generator()),
            args.repeats,
        )

    if len(backends) == 2:
        print("speedup numba vs numpy:")
        for key, label in (("quad", "quadrature"), ("mb", "matrix-beta"), ("st", "stiefel")):
            print(f"  {label:<28s} {results['numpy', key] / results['numba', key]:8.2f} x")


if __name__ == "__main__":
    main()
