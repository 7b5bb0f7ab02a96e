"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call (compilation, or loading the on-disk cache) is done
before timing starts.
"""
import argparse
import time

import numpy as np

from weaknorms import _kernels


def _best(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    a1 = rng.standard_normal(512)
    b1 = rng.standard_normal(512)
    a2 = rng.standard_normal((32, 32))
    b2 = rng.standard_normal((32, 32))
    vals = np.abs(rng.standard_normal(4096))
    cands = np.unique(np.concatenate(([0.0], vals)))
    g2 = rng.standard_normal((256, 256))
    g3 = rng.standard_normal((64, 64, 64))
    return [
        ("direct_convolve 1d N=512", _kernels.direct_convolve_np, _kernels.direct_convolve_nb, (a1, b1)),
        ("direct_convolve 2d N=32", _kernels.direct_convolve_np, _kernels.direct_convolve_nb, (a2, b2)),
        ("kfunc_bruteforce 4096 samples", _kernels.kfunc_bruteforce_np, _kernels.kfunc_bruteforce_nb,
         (vals, cands, 0.5, 1e-3)),
        ("mean_oscillation 2d N=256 level 4", _kernels.mean_oscillation_np, _kernels.mean_oscillation_nb, (g2, 4)),
        ("mean_oscillation 3d N=64 level 3", _kernels.mean_oscillation_np, _kernels.mean_oscillation_nb, (g3, 3)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        print("numba is not importable; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}  max|diff|")
    for name, f_np, f_nb, fargs in cases(rng):
        r_nb = f_nb(*fargs)  # warm-up / compile
        r_np = f_np(*fargs)
        diff = float(np.max(np.abs(np.asarray(r_np) - np.asarray(r_nb))))
        t_np = _best(f_np, fargs, args.repeat)
        t_nb = _best(f_nb, fargs, args.repeat)
        print(f"{name:40s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}  {diff:.2e}")


if __name__ == "__main__":
    main()
