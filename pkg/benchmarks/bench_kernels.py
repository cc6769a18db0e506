"""Timing comparison for the two branch-enumeration kernels.

Runs the numba-compiled kernel and its pure-numpy twin on the same
inputs across a few circuit sizes and prints one table row each. The
first numba call per process pays JIT compilation; that call happens
before the stopwatch starts. Usage:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from shorsim._kernels import (
    HAS_NUMBA,
    active_backend,
    branch_probabilities_numba,
    branch_probabilities_numpy,
)
from shorsim.compiler import build_semiclassical_stages
from shorsim.simulator import _stage_perm_invs

# (label, base, modulus, readout bits); spans are the multiplicative
# orders, so cells = 2**s * span stays under ~35 MB of state
WORKLOADS = (
    ("tiny", 7, 15, 10),
    ("small", 2, 33, 12),
    ("medium", 2, 257, 14),
    ("large", 2, 65537, 16),
)


def _inputs(a: int, n: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    circuit = build_semiclassical_stages(a, n, s)
    perm_invs = _stage_perm_invs(circuit)
    init = np.zeros(circuit.work_register_span, dtype=np.complex128)
    init[0] = 1.0
    return init, perm_invs


def _best_of(fn, init, perm_invs, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(init, perm_invs)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed runs per kernel; best is reported")
    args = parser.parse_args()

    print(f"numba available: {HAS_NUMBA}; dispatcher resolves to "
          f"{active_backend()!r}")
    header = (f"{'workload':<10} {'span':>6} {'stages':>6} {'cells':>10} "
              f"{'numpy':>12} {'numba':>12} {'speedup':>8}")
    print(header)
    print("-" * len(header))

    for label, a, n, s in WORKLOADS:
        init, perm_invs = _inputs(a, n, s)
        span = init.shape[0]
        cells = (1 << s) * span

        if HAS_NUMBA:
            # warm the JIT (and the allocator) outside the timing
            branch_probabilities_numba(init, perm_invs)
        branch_probabilities_numpy(init, perm_invs)

        t_numpy = _best_of(branch_probabilities_numpy, init, perm_invs,
                           args.repeats)
        if HAS_NUMBA:
            t_numba = _best_of(branch_probabilities_numba, init, perm_invs,
                               args.repeats)
            ratio = f"{t_numpy / t_numba:7.2f}x"
            numba_col = f"{t_numba * 1e3:10.3f}ms"
        else:
            numba_col, ratio = f"{'n/a':>12}", f"{'n/a':>8}"

        print(f"{label:<10} {span:>6} {s:>6} {cells:>10} "
              f"{t_numpy * 1e3:10.3f}ms {numba_col} {ratio}")

        check_a = branch_probabilities_numpy(init, perm_invs)
        if HAS_NUMBA:
            check_b = branch_probabilities_numba(init, perm_invs)
            if not np.allclose(check_a, check_b, atol=1e-12):
                raise SystemExit(f"kernel disagreement on {label}")

    print("kernels agree to 1e-12 on every workload" if HAS_NUMBA
          else "numba not installed; numpy-only timings shown")


if __name__ == "__main__":
    main()
