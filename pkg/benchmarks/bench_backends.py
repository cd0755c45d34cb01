"""Compare kernel backends on the hot paths.

Times digit extraction, digit counting, compensated summation and the
synthetic generators on the jitted backend and on the plain vectorized
fallback, printing per-element timings and the speedup. Run from a
checkout as::

    python3 benchmarks/bench_backends.py --n 2000000 --repeats 5
"""
import argparse
import importlib
import time

import numpy as np


def best_of(repeats, fn, *args):
    """Best wall time over ``repeats`` calls, in seconds."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def load_backends():
    backends = {}
    for name in ("numpy", "numba"):
        try:
            backends[name] = importlib.import_module(
                f"benfordaudit._kernels.{name}_impl")
        except ImportError:
            print(f"backend {name!r} unavailable; skipping")
    return backends


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1_000_000,
                        help="elements per kernel call (default 1e6)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="calls per measurement, best one counts")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    backends = load_backends()
    reference = backends["numpy"]
    values = np.ascontiguousarray(
        reference.generate_values(0, args.n, 6, 0.0, np.uint64(args.seed),
                                  np.uint64(0)))

    cases = [
        ("first_digits", lambda mod: mod.first_digits(values)),
        ("digit_counts", lambda mod: mod.digit_counts(values)),
        ("compensated_sum", lambda mod: mod.compensated_sum(values)),
        ("generate benford", lambda mod: mod.generate_values(
            0, args.n, 6, 0.0, np.uint64(args.seed), np.uint64(0))),
        ("generate mixture", lambda mod: mod.generate_values(
            3, args.n, 6, 0.3, np.uint64(args.seed), np.uint64(0))),
    ]

    if "numba" in backends:
        backends["numba"].warmup()

    timings = {}
    for name, module in backends.items():
        for label, call in cases:
            call(module)  # warm caches (and jit specializations) first
            timings[(name, label)] = best_of(args.repeats, call, module)

    print(f"\nn = {args.n:,} elements, best of {args.repeats}\n")
    header = f"{'kernel':<20}{'numpy':>12}{'numba':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, _ in cases:
        base = timings[("numpy", label)]
        row = f"{label:<20}{base * 1e3:>10.2f}ms"
        if ("numba", label) in timings:
            jit = timings[("numba", label)]
            row += f"{jit * 1e3:>10.2f}ms{base / jit:>9.2f}x"
        else:
            row += f"{'-':>12}{'-':>10}"
        print(row)

    # the comparison is only honest if both backends agree on the results
    digits = reference.first_digits(values)
    if "numba" in backends:
        assert (digits == backends["numba"].first_digits(values)).all()
        print("\nresult parity between backends verified on this run")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
