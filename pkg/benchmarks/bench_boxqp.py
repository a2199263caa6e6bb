"""Timing comparison of the compiled box-QP kernel against the numpy twin.

Run from the repository root:

    python benchmarks/bench_boxqp.py

Builds random problems at the sizes the experiment harnesses hit, solves
each with both kernels, and prints per-solve times plus the speedup. Also
cross-checks that both kernels reach the same objective.
"""
import time

import numpy as np

from icls import _boxqp_py
from icls.linalg import normal_projector

try:
    from icls import _boxqp_c
except ImportError:
    _boxqp_c = None

SIZES = [(25, 16), (25, 64), (25, 256), (25, 1024), (50, 2048)]
REPEATS = 20
TOL = 1e-8
MAX_ITER = 5000


def build(rng, n_labeled, n_unlabeled, n_features=3):
    x_l = np.hstack([np.ones((n_labeled, 1)), rng.normal(size=(n_labeled, n_features))])
    x_u = np.hstack([np.ones((n_unlabeled, 1)), rng.normal(size=(n_unlabeled, n_features))])
    y = rng.integers(0, 2, size=n_labeled).astype(np.float64)
    projector = normal_projector(np.vstack([x_l, x_u]))
    hat = x_l @ projector
    a_u = np.ascontiguousarray(hat[:, n_labeled:])
    r0 = hat[:, :n_labeled] @ y - y
    return a_u, r0


def time_kernel(kernel, a_u, r0, init):
    best = np.inf
    objective = None
    for _ in range(REPEATS):
        start = time.perf_counter()
        _, iters, f, _, conv = kernel(a_u, r0, init, TOL, MAX_ITER)
        best = min(best, time.perf_counter() - start)
        objective = f
        assert conv, "kernel failed to converge in the benchmark"
    return best, objective, iters


def fmt(seconds):
    return f"{seconds * 1e3:8.3f} ms"


def main():
    if _boxqp_c is None:
        print("compiled kernel not built; only timing the python kernel")
    rng = np.random.default_rng(0)
    header = f"{'L':>4} {'U':>6} {'python':>12} {'iters':>6}"
    if _boxqp_c is not None:
        header += f" {'compiled':>12} {'iters':>6} {'per-iter speedup':>17}"
    print(header)
    for n_labeled, n_unlabeled in SIZES:
        a_u, r0 = build(rng, n_labeled, n_unlabeled)
        init = np.full(n_unlabeled, 0.5)
        t_py, f_py, it_py = time_kernel(_boxqp_py.solve_kernel, a_u, r0, init)
        line = f"{n_labeled:>4} {n_unlabeled:>6} {fmt(t_py)} {it_py:>6}"
        if _boxqp_c is not None:
            t_c, f_c, it_c = time_kernel(_boxqp_c.solve_kernel, a_u, r0, init)
            assert abs(f_py - f_c) <= 1e-9 * max(1.0, abs(f_py)), "kernels disagree"
            speedup = (t_py / it_py) / (t_c / it_c)
            line += f" {fmt(t_c)} {it_c:>6} {speedup:>16.1f}x"
        print(line)


if __name__ == "__main__":
    main()
