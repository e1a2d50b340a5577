"""Numba vs numpy timings for the two hot kernels.

    python benchmarks/bench_kernels.py [--terms 20000] [--points 4096] [--sieve 10000000]

Both backends must agree bit for bit; the script checks that before timing.
"""

import argparse
import time
import warnings

import numpy as np

warnings.filterwarnings("ignore", message=".*TBB.*")

from fracfourier import _kernels  # noqa: E402


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_series(terms, points, k, repeat):
    n = np.arange(1, terms + 1)
    amp = (1.0 / n**2).astype(np.complex128)
    hi, fl = _kernels.multipliers(n, k)
    t = np.arange(points) / points
    stops = np.array([terms])

    def run(backend):
        return _kernels.series_sums(amp, hi, fl, t, stops, backend=backend)

    ref = run("numpy")
    got = run("numba")  # also triggers compilation
    if not np.array_equal(ref, got):
        raise SystemExit("series backends disagree")
    out = {}
    for backend in ("numba", "numpy"):
        out[backend] = best_of(lambda: run(backend), repeat)
    return out, terms * points


def bench_sieve(limit, repeat):
    ref = _kernels.sieve_mu_lambda(limit, backend="numpy")
    got = _kernels.sieve_mu_lambda(limit, backend="numba")
    if not (np.array_equal(ref[0], got[0]) and np.array_equal(ref[1], got[1])):
        raise SystemExit("sieve backends disagree")
    return {b: best_of(lambda: _kernels.sieve_mu_lambda(limit, backend=b), repeat) for b in ("numba", "numpy")}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=20000)
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--sieve", type=int, default=10**7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    times, work = bench_series(args.terms, args.points, args.k, args.repeat)
    print(f"series  {args.terms} terms x {args.points} points (k={args.k})")
    for backend, sec in times.items():
        print(f"  {backend:6s} {sec:8.3f} s   {sec / work * 1e9:6.2f} ns/term")
    print(f"  speedup {times['numpy'] / times['numba']:.1f}x")

    times = bench_sieve(args.sieve, args.repeat)
    print(f"sieve   limit {args.sieve}")
    for backend, sec in times.items():
        print(f"  {backend:6s} {sec:8.3f} s")
    print(f"  speedup {times['numpy'] / times['numba']:.1f}x")


if __name__ == "__main__":
    main()
