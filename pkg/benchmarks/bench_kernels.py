"""Batched determinant kernel: numba against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--batch 200000] [--repeat 3]

Also times a full expectation (K_5 double signing, 2^20 sign pairs) under
each backend by toggling SPECTRACERT_NO_NUMBA.
"""

import argparse
import os
import time

import numpy as np

from spectracert import kernels
from spectracert.convolution import kn_double_signing


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    kernels.batch_det(np.eye(3, dtype=np.int64)[None], "numba")  # compile outside the timing

    print(f"{'n':>3} {'batch':>8} {'numba s':>9} {'numpy s':>9} {'ratio':>6}")
    for n in (3, 5, 7, 9):
        mats = rng.integers(-2, 3, size=(args.batch, n, n))
        t_nb, d_nb = best_of(lambda: kernels.batch_det(mats, "numba"), args.repeat)
        t_np, d_np = best_of(lambda: kernels.batch_det(mats, "numpy"), args.repeat)
        assert d_nb == d_np
        print(f"{n:>3} {args.batch:>8} {t_nb:>9.3f} {t_np:>9.3f} {t_np / t_nb:>6.1f}")

    for flag in ("0", "1"):
        os.environ[kernels.ENV_FLAG] = flag
        t, out = best_of(lambda: kn_double_signing(5), 1)
        print(f"K_5 double signing, backend={kernels.backend():5s}: {t:.2f}s -> {out}")


if __name__ == "__main__":
    main()
