"""Timing comparison of the two coefficient kernels.

Run from the repository root:

    python3 benchmarks/bench_tau.py --sizes 2000,10000,50000 --repeats 3

Both backends produce identical integers (the test suite checks that);
this script only reports wall time and the speedup of the compiled
recurrence over the big-int fallback.
"""

import argparse
import time

from cuspsums.coeffs import COMPILED_AVAILABLE, tau_sequence


def best_of(repeats: int, fn) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="2000,10000,50000",
                        help="comma-separated table sizes")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats; best is reported")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not COMPILED_AVAILABLE:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'n_max':>10} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>9}")
    for n in sizes:
        t_py = best_of(args.repeats, lambda: tau_sequence(n, backend="python"))
        if COMPILED_AVAILABLE:
            t_c = best_of(args.repeats,
                          lambda: tau_sequence(n, backend="compiled"))
            print(f"{n:>10} {t_py:>12.4f} {t_c:>13.4f} {t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>10} {t_py:>12.4f} {'-':>13} {'-':>9}")


if __name__ == "__main__":
    main()
