# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the box-constrained quadratic program.

Same algorithm as ``_boxqp_py.solve_kernel`` (projected scaled-gradient
steps with exact segment search, Barzilai-Borwein scaling, and a
conjugate-gradient sweep over the interior coordinates after every step),
with the whole iteration fused into C loops so per-iteration interpreter
overhead is gone.
"""
import numpy as np

from libc.math cimport INFINITY, fabs

KERNEL_NAME = "compiled"

cdef double STEP_CAP = 1e12


cdef inline double _clip01(double x) nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def solve_kernel(a_u, r0, v0, double tol, int max_iter):
    """Returns (v, iterations, final_objective, pg_inf, converged)."""
    a_u = np.ascontiguousarray(a_u, dtype=np.float64)
    r0 = np.ascontiguousarray(r0, dtype=np.float64)

    cdef const double[:, ::1] a = a_u
    cdef const double[::1] base = r0
    cdef Py_ssize_t n_l = a.shape[0]
    cdef Py_ssize_t n_u = a.shape[1]

    v_arr = np.clip(np.asarray(v0, dtype=np.float64), 0.0, 1.0)
    cdef double[::1] v = v_arr
    cdef double[::1] r = np.empty(n_l, dtype=np.float64)
    cdef double[::1] g = np.empty(n_u, dtype=np.float64)
    cdef double[::1] d = np.empty(n_u, dtype=np.float64)
    cdef double[::1] ad = np.empty(n_l, dtype=np.float64)
    cdef double[::1] p = np.empty(n_u, dtype=np.float64)
    cdef double[::1] ap = np.empty(n_l, dtype=np.float64)
    cdef unsigned char[::1] free = np.empty(n_u, dtype=np.uint8)

    cdef double two_over_l = 2.0 / n_l
    cdef double cg_tol_sq = (0.1 * tol) * (0.1 * tol)
    cdef double lam = 0.0, step, acc, pg_inf = 0.0
    cdef double slope, curv, t, dd, gi
    cdef double rr, rr_new, gdotp, php, alpha, alpha_box, beta
    cdef Py_ssize_t i, j, n_free, cg_budget, k
    cdef int iterations = 0
    cdef bint converged = False, moved, cg_moved

    for i in range(n_l):
        for j in range(n_u):
            lam += a[i, j] * a[i, j]
    lam *= two_over_l
    step = 1.0 / lam if lam > 0.0 else 1.0

    # r = a v + r0 ; g = (2/L) a' r, accumulated row-wise so every inner
    # loop runs stride-1
    for i in range(n_l):
        acc = base[i]
        for j in range(n_u):
            acc += a[i, j] * v[j]
        r[i] = acc
    for j in range(n_u):
        g[j] = 0.0
    for i in range(n_l):
        acc = r[i]
        for j in range(n_u):
            g[j] += a[i, j] * acc
    for j in range(n_u):
        g[j] *= two_over_l

    while True:
        pg_inf = 0.0
        for j in range(n_u):
            gi = g[j]
            if v[j] <= 0.0 and gi > 0.0:
                gi = 0.0
            elif v[j] >= 1.0 and gi < 0.0:
                gi = 0.0
            if fabs(gi) > pg_inf:
                pg_inf = fabs(gi)
        if pg_inf <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        # projected scaled-gradient step, exact along its segment
        moved = False
        for j in range(n_u):
            d[j] = _clip01(v[j] - step * g[j]) - v[j]
            if d[j] != 0.0:
                moved = True
        if not moved:
            break  # projection cannot move: numerically stalled

        slope = 0.0
        curv = 0.0
        for i in range(n_l):
            acc = 0.0
            for j in range(n_u):
                acc += a[i, j] * d[j]
            ad[i] = acc
            slope += r[i] * acc
            curv += acc * acc
        slope *= two_over_l
        curv *= two_over_l
        if slope >= 0.0:
            break  # no descent left along the arc at float precision
        t = 1.0 if curv <= 0.0 else min(1.0, -slope / curv)

        for j in range(n_u):
            v[j] = _clip01(v[j] + t * d[j])
        for i in range(n_l):
            acc = base[i]
            for j in range(n_u):
                acc += a[i, j] * v[j]
            r[i] = acc
        for j in range(n_u):
            g[j] = 0.0
        for i in range(n_l):
            acc = r[i]
            for j in range(n_u):
                g[j] += a[i, j] * acc
        for j in range(n_u):
            g[j] *= two_over_l
        iterations += 1
        if curv > 0.0:
            dd = 0.0
            for j in range(n_u):
                dd += d[j] * d[j]
            step = min(dd / curv, STEP_CAP / lam)

        # conjugate gradients on the interior coordinates
        n_free = 0
        for j in range(n_u):
            if 0.0 < v[j] < 1.0:
                free[j] = 1
                n_free += 1
            else:
                free[j] = 0
        if n_free == 0 or iterations >= max_iter:
            continue
        rr = 0.0
        for j in range(n_u):
            if free[j]:
                rr += g[j] * g[j]
        if rr <= cg_tol_sq:
            continue
        for j in range(n_u):
            p[j] = -g[j] if free[j] else 0.0
        cg_budget = min(n_l, n_free) + 3
        cg_moved = False
        for k in range(cg_budget):
            if iterations >= max_iter:
                break
            gdotp = 0.0
            for j in range(n_u):
                gdotp += g[j] * p[j]
            if gdotp >= 0.0:
                break
            php = 0.0
            for i in range(n_l):
                acc = 0.0
                for j in range(n_u):
                    acc += a[i, j] * p[j]
                ap[i] = acc
                php += acc * acc
            php *= two_over_l
            if php <= 0.0:
                break
            alpha = -gdotp / php
            alpha_box = INFINITY
            for j in range(n_u):
                if p[j] > 0.0:
                    alpha_box = min(alpha_box, (1.0 - v[j]) / p[j])
                elif p[j] < 0.0:
                    alpha_box = min(alpha_box, v[j] / -p[j])
            if alpha >= alpha_box:
                # descent direction reaches the boundary: step onto it,
                # leave the face, and let the outer loop take over
                for j in range(n_u):
                    v[j] = _clip01(v[j] + alpha_box * p[j])
                iterations += 1
                cg_moved = True
                break
            for j in range(n_u):
                v[j] = _clip01(v[j] + alpha * p[j])
            # g += alpha * (2/L) a'(a p), accumulated row-wise through d
            for j in range(n_u):
                d[j] = 0.0
            for i in range(n_l):
                acc = ap[i]
                for j in range(n_u):
                    d[j] += a[i, j] * acc
            for j in range(n_u):
                g[j] += alpha * two_over_l * d[j]
            iterations += 1
            cg_moved = True
            rr_new = 0.0
            for j in range(n_u):
                if free[j]:
                    rr_new += g[j] * g[j]
            if rr_new <= cg_tol_sq:
                break
            beta = rr_new / rr
            for j in range(n_u):
                p[j] = (-g[j] if free[j] else 0.0) + beta * p[j]
            rr = rr_new
        if cg_moved:  # refresh the residual and gradient without update drift
            for i in range(n_l):
                acc = base[i]
                for j in range(n_u):
                    acc += a[i, j] * v[j]
                r[i] = acc
            for j in range(n_u):
                g[j] = 0.0
            for i in range(n_l):
                acc = r[i]
                for j in range(n_u):
                    g[j] += a[i, j] * acc
            for j in range(n_u):
                g[j] *= two_over_l

    acc = 0.0
    for i in range(n_l):
        acc += r[i] * r[i]
    return v_arr, iterations, acc / n_l, pg_inf, bool(converged)
