"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Both backends are imported directly, so ``SOLIDHULL_NO_JIT`` has no effect
here. Compilation is excluded by a warm-up call.
"""
import argparse
import time

import numpy as np

from solidhull import _kernels_nb as nb
from solidhull import _kernels_np as npk


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(scale):
    rng = np.random.default_rng(0)
    m = np.geomspace(1, 1e9, int(1e5 * scale))
    yield f"solve_gaps {len(m)} radii", lambda k: k.solve_gaps(m, 1.0, 1.0, 1e-13, 1000)

    n = int(1e7 * scale)
    idx = np.arange(n, dtype=np.int64)
    la = rng.normal(0, 5, n)
    quartic = np.arange(1, 60) ** 4
    bounds = np.concatenate([[-1], quartic[quartic < n - 1], [n - 1]]).astype(np.int64)
    slopes = -rng.random(len(bounds) - 1) * 1e-4
    yield f"segmented_log_norm {n} terms p=2", \
        lambda k: k.segmented_log_norm(idx, la, bounds, slopes, 2.0)

    sidx = np.sort(rng.choice(10 ** 6, int(2e4 * scale), replace=False)).astype(np.int64)
    sla = rng.normal(0, 3, len(sidx))
    log_r = np.log1p(-np.geomspace(1e-6, 0.5, 256))
    yield f"log_series {len(sidx)} terms x 256 radii", lambda k: k.log_series(sidx, sla, log_r)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, run in cases(args.scale):
        t_np = best_of(lambda: run(npk), args.repeat)
        t_nb = best_of(lambda: run(nb), args.repeat)
        print(f"{name:40s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
