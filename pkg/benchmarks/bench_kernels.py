"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from polarbounds import _kernels as K
from polarbounds.codes import cell600


def best_of(fn, repeat):
    fn()  # warm-up (JIT compile on the numba side)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    t = np.cos(np.linspace(0, np.pi, 4001))
    z = np.repeat(np.sort(rng.uniform(-1, 1, 12)), 2)
    f, df = np.exp(z), np.exp(z)
    P = cell600().points
    X = rng.standard_normal((2000, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    params = np.array([2.0])
    return [
        ("jacobi_table k=40 x4001", (K._jacobi_table_np, (40, 0.5, 0.5, t)), ("_jacobi_table_nb", (40, 0.5, 0.5, t))),
        ("jacobi_with_deriv k=40", (K._jacobi_with_deriv_np, (40, 0.5, 0.5, t)), ("_jacobi_with_deriv_nb", (40, 0.5, 0.5, t))),
        ("divided_differences m=24", (K._divided_differences_np, (z, f, df)), ("_divided_differences_nb", (z, f, df))),
        ("potential_batch 2000x120 riesz", (K._potential_batch_np, (X, P, K.RIESZ, params)),
         ("_potential_batch_nb", (X, P, K.RIESZ, params))),
        ("potential_batch 2000x120 gauss", (K._potential_batch_np, (X, P, K.GAUSS, params)),
         ("_potential_batch_nb", (X, P, K.GAUSS, params))),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {K.HAS_NUMBA}")
    print(f"{'kernel':<34}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, (np_fn, np_args), (nb_name, nb_args) in cases():
        t_np = best_of(lambda: np_fn(*np_args), args.repeat)
        nb_fn = getattr(K, nb_name, None)
        if nb_fn is None:
            print(f"{name:<34}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}")
            continue
        t_nb = best_of(lambda: nb_fn(*nb_args), args.repeat)
        print(f"{name:<34}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
