#!/usr/bin/env python3
"""Benchmark the compiled grid-scan kernel against the numpy fallback.

Runs the contractivity-ratio scan for each built-in binary mean over the
same grid in both lanes, times them, and checks the results agree
bit-for-bit. Without the compiled extension only the numpy lane runs.

    python3 benchmarks/bench_lambda_grid.py [--step 2e-4] [--repeat 3]
"""

import argparse
import time

from equimean._kernels import KERNEL_CODES, _compiled, fallback

CASES = [
    ("arith2", 0.0, 0.0, 1.0),
    ("geom", 0.0, 1.0, 4.0),
    ("minsq", 0.0, 0.0, 1.0),
]


def time_lane(fn, code, param, a, b, step, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(code, param, a, b, step, 1e-6)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--step", type=float, default=2e-4, help="grid step per axis")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    if _compiled is None:
        print("compiled kernel not built; timing the numpy lane only")
    header = f"{'mean':<8} {'pairs':>12} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}  agree"
    print(header)
    print("-" * len(header))
    for kernel, param, a, b in CASES:
        code = KERNEL_CODES[kernel]
        t_np, r_np = time_lane(fallback.grid_scan, code, param, a, b, args.step, args.repeat)
        if _compiled is not None:
            t_cy, r_cy = time_lane(_compiled.grid_scan, code, param, a, b, args.step, args.repeat)
            agree = "yes" if r_cy == r_np else "NO"
            print(f"{kernel:<8} {r_np[3]:>12} {t_np:>10.3f} {t_cy:>11.3f} "
                  f"{t_np / t_cy:>8.1f}x  {agree}")
            if r_cy != r_np:
                return 1
        else:
            print(f"{kernel:<8} {r_np[3]:>12} {t_np:>10.3f} {'-':>11} {'-':>8}  -")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
