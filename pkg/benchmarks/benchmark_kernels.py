#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback path.

The three loop-shaped conditional-SER kernels dominate the Monte Carlo
verification runtime; this script times both backends on the same inputs
and checks they agree.  Run from the repo root:

    python benchmarks/benchmark_kernels.py

Setting GREENLINK_NUMBA=0 would disable the jit path entirely; here both
implementations are invoked directly so a single run compares them.
"""

import time

import numpy as np

from greenlink import _kernels

N_SAMPLES = 1_000_000
GAMMA_BAR = 100.0


def bench(label, fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    print(f"  {label:<28} {best * 1e3:9.2f} ms")
    return out, best


def main():
    print(f"kernel backend: {_kernels.backend()}")
    rng = np.random.default_rng(0)
    g = -GAMMA_BAR * np.log(1.0 - rng.random(N_SAMPLES))
    print(f"{N_SAMPLES} exponential SNR samples, mean {GAMMA_BAR}")

    if _kernels.backend() == "numba":
        # warm the jit caches before timing
        _kernels.orth_ser(g[:16], 64)
        _kernels.doqpsk_ser(g[:16])
        _kernels.coh_mfsk_ser(g[:16], 64)

    print("\northogonal noncoherent SER, M=64")
    ref, t_np = bench("numpy mixture/series", _kernels._orth_ser_numpy, g, 64)
    if _kernels.backend() == "numba":
        out, t_jit = bench("numba mixture/series", _kernels.orth_ser, g, 64)
        print(f"  speedup {t_np / t_jit:5.1f}x   match: {np.allclose(out, ref, rtol=1e-11)}")

    print("\nDOQPSK Marcum-Q SER")
    gd = g[:200_000]  # the scipy ncx2 fallback is the slow one here
    ref, t_np = bench("numpy (scipy ncx2)", _kernels._doqpsk_ser_numpy, gd)
    if _kernels.backend() == "numba":
        out, t_jit = bench("numba Poisson series", _kernels.doqpsk_ser, gd)
        print(f"  speedup {t_np / t_jit:5.1f}x   match: {np.allclose(out, ref, rtol=1e-8, atol=1e-12)}")

    print("\ncoherent MFSK SER, M=64 (128-node Gauss-Hermite)")
    ref, t_np = bench("numpy dense nodes", _kernels._coh_mfsk_ser_numpy, g, 64)
    if _kernels.backend() == "numba":
        out, t_jit = bench("numba windowed nodes", _kernels.coh_mfsk_ser, g, 64)
        print(f"  speedup {t_np / t_jit:5.1f}x   match: {np.allclose(out, ref, atol=1e-11)}")


if __name__ == "__main__":
    main()
