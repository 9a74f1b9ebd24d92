"""Compare the numba and pure-numpy paths of the Bessel series kernel.

Run: python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeats 5]
"""
import argparse
import time

import numpy as np

from dunklkit import _accel


def bench(fn, alpha, u, repeats):
    fn(alpha, u[:8])  # warm-up / JIT compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(alpha, u)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--alpha", type=float, default=0.5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {_accel.HAVE_NUMBA}")
    print(f"{'n':>8} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for n in (int(s) for s in args.sizes.split(",")):
        # the series is only used in this region (|u| <= 30, little cancellation)
        u = rng.uniform(-10, 10, n) + 1j * rng.uniform(-30, 30, n)
        t_np = bench(_accel.bessel_series_numpy, args.alpha, u, args.repeats)
        ref, _ = _accel.bessel_series_numpy(args.alpha, u)
        if _accel.HAVE_NUMBA:
            t_nb = bench(_accel.bessel_series, args.alpha, u, args.repeats)
            val, _ = _accel.bessel_series(args.alpha, u)
            diff = np.max(np.abs(val - ref) / np.maximum(1.0, np.abs(ref)))
            print(f"{n:>8} {t_np:>11.4f} {t_nb:>11.4f} {t_np / t_nb:>8.1f} {diff:>11.2e}")
        else:
            print(f"{n:>8} {t_np:>11.4f} {'-':>11} {'-':>8} {'-':>11}")


if __name__ == "__main__":
    main()
