"""Benchmark the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 1000,10000,100000]

Both implementations are imported directly, so the timings are unaffected
by which backend the package selected at import time.
"""

import argparse
import time

import numpy as np

from radineq._kernels import _fallback

try:
    from radineq._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,10000,100000",
                        help="comma-separated array sizes")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    c, delta, n = 0.5, 1.0, 3
    rng = np.random.default_rng(0)

    print(f"{'kernel':<28}{'size':>9}{'python':>12}{'compiled':>12}{'speedup':>9}")
    for size in sizes:
        r = np.sort(rng.uniform(1e-3, 50.0, size))
        tp = _time(_fallback.smoothed_cone_eval, r, c, delta,
                   repeats=args.repeats)
        if _core is not None:
            tc = _time(_core.smoothed_cone_eval, r, c, delta,
                       repeats=args.repeats)
            a = _fallback.smoothed_cone_eval(r, c, delta)
            b = _core.smoothed_cone_eval(r, c, delta)
            assert all(np.allclose(x, y, rtol=1e-13) for x, y in zip(a, b))
            line = f"{tc * 1e3:>10.3f}ms{tp / tc:>9.1f}x"
        else:
            line = f"{'n/a':>12}{'n/a':>9}"
        print(f"{'smoothed_cone_eval':<28}{size:>9}{tp * 1e3:>10.3f}ms{line}")

    for size in [100, 1000, 10000]:
        r = np.sort(rng.uniform(1e-3, 50.0, size))
        tp = _time(_fallback.ball_volume_integral_smoothed_cone,
                   r, c, delta, n, repeats=args.repeats)
        if _core is not None:
            tc = _time(_core.ball_volume_integral_smoothed_cone,
                       r, c, delta, n, repeats=args.repeats)
            a = _fallback.ball_volume_integral_smoothed_cone(r, c, delta, n)
            b = _core.ball_volume_integral_smoothed_cone(r, c, delta, n)
            assert np.allclose(a, b, rtol=1e-12)
            line = f"{tc * 1e3:>10.3f}ms{tp / tc:>9.1f}x"
        else:
            line = f"{'n/a':>12}{'n/a':>9}"
        print(f"{'ball_volume_integral':<28}{size:>9}{tp * 1e3:>10.3f}ms{line}")

    if _core is None:
        print("\ncompiled extension not built; showing fallback only")


if __name__ == "__main__":
    main()
