"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--trials 200]

Reports per-call time of the Hermitian eigensolver and of the pivoted Cholesky
test for small n, then the wall time of a few suite checks under each backend.
"""

import argparse
import timeit

import numpy as np

from ppt_means import _kernels
from ppt_means.verify import run_check
from ppt_means.verify.generators import random_hermitian


def per_call_us(fn, arg, number):
    fn(arg)  # warm up (triggers compilation for numba)
    best = min(timeit.repeat(lambda: fn(arg), number=number, repeat=5))
    return 1e6 * best / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--checks", default="C6,C8,C18,C21")
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    rng = np.random.default_rng(0)

    print(f"{'n':>3} " + " ".join(f"{'eigh ' + b:>12}" for b in backends)
          + " " + " ".join(f"{'chol ' + b:>12}" for b in backends) + "   (us/call)")
    for n in (2, 3, 4, 6, 8, 12, 16):
        a = np.ascontiguousarray(random_hermitian(rng, n))
        pd = a @ a + np.eye(n)
        row = []
        for kernel, x in ((_kernels.eigh_desc, a), (_kernels.cholesky_pd, pd)):
            for b in backends:
                with _kernels.use_backend(b):
                    row.append(per_call_us(kernel, x, 2000))
        print(f"{n:>3} " + " ".join(f"{v:>12.2f}" for v in row))

    print()
    print(f"{'check':>6} " + " ".join(f"{b + ' [s]':>12}" for b in backends))
    for cid in args.checks.split(","):
        row = []
        for b in backends:
            with _kernels.use_backend(b):
                r = run_check(cid, 3, args.trials, seed=1, timing=True)
            row.append(r.wall_ms / 1e3)
        print(f"{cid:>6} " + " ".join(f"{v:>12.3f}" for v in row))


if __name__ == "__main__":
    main()
