import numpy as np
import pytest

from icls import _boxqp_py

try:
    from icls import _boxqp_c

    KERNELS = {"python": _boxqp_py.solve_kernel, "compiled": _boxqp_c.solve_kernel}
except ImportError:
    KERNELS = {"python": _boxqp_py.solve_kernel}


@pytest.fixture(params=sorted(KERNELS), ids=sorted(KERNELS))
def qp_kernel(request):
    return KERNELS[request.param]


def random_instance(rng, n_labeled, n_features, n_unlabeled, intercept=True):
    """Random labeled/unlabeled designs with 0/1 labels covering both classes."""
    def design(rows):
        x = rng.normal(size=(rows, n_features))
        if intercept:
            x = np.hstack([np.ones((rows, 1)), x])
        return x

    x_l = design(n_labeled)
    while True:
        y = rng.integers(0, 2, size=n_labeled).astype(np.float64)
        if n_labeled < 2 or (np.any(y == 0.0) and np.any(y == 1.0)):
            break
    x_u = design(n_unlabeled)
    return x_l, y, x_u


def descent_least_squares(design, targets, tol=1e-12, max_iter=2_000_000):
    """Plain gradient descent on the mean squared residual; the iterative
    oracle used instead of any closed form."""
    x = np.asarray(design, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    n = x.shape[0]
    gram = x.T @ x
    lip = 2.0 * float(np.linalg.eigvalsh(gram).max()) / n
    step = 1.0 / lip
    beta = np.zeros(x.shape[1])
    for _ in range(max_iter):
        grad = 2.0 * (x.T @ (x @ beta - y)) / n
        if np.max(np.abs(grad)) < tol:
            break
        beta = beta - step * grad
    return beta
