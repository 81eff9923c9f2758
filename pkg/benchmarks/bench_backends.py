#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Workloads mirror the hot paths of the experiment harness: per-antenna channel
solves (batch of scalar problems), multiuser detection descents, and LDPC
belief-propagation decoding.

    python benchmarks/bench_backends.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from cauchymimo import _kernels_py
from cauchymimo.coding import default_code

try:
    from cauchymimo import _kernels as _compiled
except ImportError:
    _compiled = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_channel_solve(impl, rng):
    # one user-coordinate step of raw-ML estimation at Table-I scale:
    # 100 antennas x tau=15, scalar unknown per antenna
    phi = np.exp(-2j * np.pi * np.outer(np.arange(15), 3) / 15) / np.sqrt(15)
    A = np.sqrt(15 * 2.0) * phi
    Y = 2.0 * (rng.standard_normal((100, 15)) + 1j * rng.standard_normal((100, 15)))
    X0 = np.zeros((100, 1), dtype=complex)
    return lambda: impl.solve_cauchy_lsq(A, Y, X0, 1.0, max_iters=40, gtol=1e-5)


def bench_detection(impl, rng):
    # 200 QPSK vectors, M=100, K=8, descent from zero
    G = (rng.standard_normal((100, 8)) + 1j * rng.standard_normal((100, 8))) / np.sqrt(2)
    Y = 3.0 * (rng.standard_normal((200, 100)) + 1j * rng.standard_normal((200, 100)))
    X0 = np.zeros((200, 8), dtype=complex)
    return lambda: impl.solve_cauchy_lsq(G, Y, X0, 1.0, max_iters=40, gtol=1e-5)


def bench_ldpc(impl, rng):
    code = default_code()
    cw = code.encode(rng.integers(0, 2, code.k).astype(np.uint8))
    llr = np.clip((1.0 - 2.0 * cw) * 1.8 + rng.standard_normal(code.n), -30, 30)
    return lambda: impl.ldpc_bp_decode(llr, code.edge_var, code.edge_chk,
                                       code.chk_adj, 50)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    benches = [
        ("channel solve (100x15, n=1)", bench_channel_solve),
        ("detection (200x100, n=8)", bench_detection),
        ("LDPC BP decode (648, 50 it)", bench_ldpc),
    ]
    print(f"{'workload':<30} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, make in benches:
        t_py = timeit(make(_kernels_py, np.random.default_rng(0)), args.repeat)
        if _compiled is None:
            print(f"{name:<30} {1e3 * t_py:>8.1f}ms {'n/a':>10} {'':>8}")
            continue
        t_c = timeit(make(_compiled, np.random.default_rng(0)), args.repeat)
        print(f"{name:<30} {1e3 * t_py:>8.1f}ms {1e3 * t_c:>8.1f}ms {t_py / t_c:>7.1f}x")
    if _compiled is None:
        print("\ncompiled extension not built; run `pip install -e .` or "
              "`python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
