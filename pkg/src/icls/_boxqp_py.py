"""Pure numpy kernel for the box-constrained quadratic program.

Minimizes ``f(v) = (1/L) * ||a_u @ v + r0||^2`` over the unit box
``0 <= v <= 1``. Each outer iteration takes a scaled gradient step projected
onto the box, then the exact minimizer of the quadratic along the resulting
segment (so the objective never increases), with Barzilai-Borwein curvature
setting the scale. Because plain projected descent crawls on ill-conditioned
interior faces, every outer step is followed by a conjugate-gradient sweep
over the strictly interior coordinates, truncated where it would leave the
box; on a fixed face CG needs at most rank-many steps, which is bounded by
the number of labeled rows.

The compiled twin in ``_boxqp_c.pyx`` runs the identical algorithm; this
module is the fallback and the reference for it.
"""
from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"

_STEP_CAP = 1e12


def _projected_gradient_inf(v: np.ndarray, g: np.ndarray) -> float:
    """Sup-norm of the gradient with components pinned at an active bound
    zeroed when they point further outside the box."""
    if v.size == 0:
        return 0.0
    masked = np.where((v <= 0.0) & (g > 0.0), 0.0, g)
    masked = np.where((v >= 1.0) & (masked < 0.0), 0.0, masked)
    return float(np.max(np.abs(masked)))


def solve_kernel(a_u, r0, v0, tol, max_iter):
    """Returns (v, iterations, final_objective, pg_inf, converged)."""
    a_u = np.ascontiguousarray(a_u, dtype=np.float64)
    n_labeled = a_u.shape[0]
    v = np.clip(np.asarray(v0, dtype=np.float64), 0.0, 1.0)
    two_over_l = 2.0 / n_labeled

    lam = two_over_l * float(np.sum(a_u * a_u))
    step = 1.0 / lam if lam > 0.0 else 1.0
    cg_tol_sq = (0.1 * tol) ** 2

    r = a_u @ v + r0
    g = two_over_l * (r @ a_u)

    iterations = 0
    converged = False
    while True:
        pg_inf = _projected_gradient_inf(v, g)
        if pg_inf <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        # projected scaled-gradient step, exact along its segment
        d = np.clip(v - step * g, 0.0, 1.0) - v
        if not np.any(d):
            break  # projection cannot move: numerically stalled
        ad = a_u @ d
        slope = two_over_l * float(r @ ad)
        curv = two_over_l * float(ad @ ad)
        if slope >= 0.0:
            break  # no descent left along the arc at float precision
        t = 1.0 if curv <= 0.0 else min(1.0, -slope / curv)
        v = np.clip(v + t * d, 0.0, 1.0)
        r = a_u @ v + r0
        g = two_over_l * (r @ a_u)
        iterations += 1
        if curv > 0.0:
            step = min(float(d @ d) / curv, _STEP_CAP / lam)

        # conjugate gradients on the interior coordinates
        free = (v > 0.0) & (v < 1.0)
        n_free = int(np.count_nonzero(free))
        if n_free == 0 or iterations >= max_iter:
            continue
        rr = float(np.sum(g[free] ** 2))
        if rr <= cg_tol_sq:
            continue
        p = np.where(free, -g, 0.0)
        moved = False
        for _ in range(min(n_labeled, n_free) + 3):
            if iterations >= max_iter:
                break
            gdotp = float(g @ p)
            if gdotp >= 0.0:
                break
            ap = a_u @ p
            php = two_over_l * float(ap @ ap)
            if php <= 0.0:
                break
            alpha = -gdotp / php
            alpha_box = np.inf
            pos = p > 0.0
            neg = p < 0.0
            if np.any(pos):
                alpha_box = float(np.min((1.0 - v[pos]) / p[pos]))
            if np.any(neg):
                alpha_box = min(alpha_box, float(np.min(v[neg] / -p[neg])))
            if alpha >= alpha_box:
                # descent direction reaches the boundary: step onto it,
                # leave the face, and let the outer loop take over
                v = np.clip(v + alpha_box * p, 0.0, 1.0)
                iterations += 1
                moved = True
                break
            v = np.clip(v + alpha * p, 0.0, 1.0)
            g = g + alpha * (two_over_l * (ap @ a_u))
            iterations += 1
            moved = True
            rr_new = float(np.sum(g[free] ** 2))
            if rr_new <= cg_tol_sq:
                break
            p = np.where(free, -g, 0.0) + (rr_new / rr) * p
            rr = rr_new
        if moved:  # refresh the residual and gradient without update drift
            r = a_u @ v + r0
            g = two_over_l * (r @ a_u)

    final_objective = float(r @ r) / n_labeled
    return v, iterations, final_objective, pg_inf, converged
