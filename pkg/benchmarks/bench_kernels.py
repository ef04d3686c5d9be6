"""Time the GF(p) kernels with numba and with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes compilation and is reported separately.
"""

import argparse
import itertools
import time

import numpy as np

from resistkit import _accel, _kernels


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = {
        "rref_mod_p 200x300 p=101": lambda: _kernels.rref_mod_p(M, 101),
        "circulant_inverse GF(3)[Z/8] (6561 rows)": lambda: _kernels.circulant_inverse(C, 3),
    }
    M = rng.integers(0, 101, size=(200, 300))
    C = np.array(list(itertools.product(range(3), repeat=8)), dtype=np.int64)

    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    print(f"{'kernel':45s} " + " ".join(f"{b:>10s}" for b in backends))
    for name, fn in cases.items():
        row = []
        for b in backends:
            with _accel.use_backend(b):
                if b == "numba":
                    t0 = time.perf_counter()
                    fn()
                    print(f"  (numba first call incl. compile: {time.perf_counter() - t0:.3f}s)")
                row.append(timed(fn, args.repeat))
        print(f"{name:45s} " + " ".join(f"{t:10.4f}" for t in row))


if __name__ == "__main__":
    main()
