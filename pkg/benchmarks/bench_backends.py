"""Compare the numba and pure-numpy kernel backends.

Times the two hot paths: the single-matrix Jacobi eigensolver and the
exhaustive unit-triangular mask scan.  Run from the repo root:

    python3 benchmarks/bench_backends.py [--n 6] [--repeat 3]
"""

import argparse
import os
import statistics
import time

import numpy as np


def timed(fn, repeat):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return min(best), statistics.mean(best)


def bench_backend(backend, n, repeat):
    os.environ["LATMAT_BACKEND"] = backend
    from latmat import _kernels
    from latmat.spectra import eigen_symmetric

    rng = np.random.default_rng(1)
    m = rng.normal(size=(24, 24))
    m = m + m.T

    # warm up (JIT compilation lands here for the numba path)
    _kernels.scan_mask_range(3, 0, 8)
    eigen_symmetric(m)

    eig_best, eig_mean = timed(lambda: [eigen_symmetric(m) for _ in range(50)], repeat)
    total = 1 << (n * (n - 1) // 2)
    scan_best, scan_mean = timed(lambda: _kernels.scan_mask_range(n, 0, total), repeat)
    return {
        "eig50_best": eig_best,
        "eig50_mean": eig_mean,
        "scan_best": scan_best,
        "scan_mean": scan_mean,
        "scanned": total,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=6, help="mask scan size (6 -> 32768 matrices)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rows = {}
    for backend in ("numpy", "numba"):
        try:
            rows[backend] = bench_backend(backend, args.n, args.repeat)
        except RuntimeError as exc:
            print(f"{backend}: skipped ({exc})")

    print(f"\nmask scan at n={args.n} ({rows[next(iter(rows))]['scanned']} Gram spectra), "
          f"repeat={args.repeat}, best-of shown\n")
    print(f"{'backend':>8}  {'50x eig 24x24':>14}  {'full scan':>10}  {'scan rate':>14}")
    for backend, r in rows.items():
        rate = r["scanned"] / r["scan_best"]
        print(f"{backend:>8}  {r['eig50_best']*1e3:>12.1f}ms  {r['scan_best']:>9.3f}s  {rate:>11.0f}/s")
    if len(rows) == 2:
        speedup = rows["numpy"]["scan_best"] / rows["numba"]["scan_best"]
        print(f"\nnumba speedup on the scan: {speedup:.1f}x")


if __name__ == "__main__":
    main()
