# solvercore/linalg.py
import numpy as np

from equinorm.exceptions import ArgumentError

SINGULAR_PIVOT = 1e-11
RESIDUAL_TOL = 1e-8
MAX_CONDITION = 1e12


class SystemSolution:
    def __init__(self, x=None, singular=False, residual=None):
        self.x = x
        self.singular = singular
        self.residual = residual

    def __bool__(self):
        return not self.singular

    def __str__(self):
        if self.singular:
            return "singular"
        return f"solution residual={self.residual:.3g}"


def solve_square_system(M, v):
    """
    Gaussian elimination with partial pivoting. Singular (or numerically
    unreliable) systems come back flagged rather than raising.
    """
    M = np.array(M, dtype=float)
    v = np.array(v, dtype=float).ravel()
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] != v.size:
        raise ArgumentError(f"expected a square system, got {M.shape} and {v.size}")
    n = v.size
    if n == 0:
        return SystemSolution(np.zeros(0), residual=0.0)
    scale = np.abs(M).max()
    if scale == 0.0:
        return SystemSolution(singular=True)

    a = np.hstack([M, v[:, None]])
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < SINGULAR_PIVOT * scale:
            return SystemSolution(singular=True)
        if p != k:
            a[[k, p]] = a[[p, k]]
        a[k + 1:] -= np.outer(a[k + 1:, k] / a[k, k], a[k])

    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (a[k, -1] - a[k, k + 1:n] @ x[k + 1:]) / a[k, k]

    residual = float(np.abs(M @ x - v).max())
    bound = RESIDUAL_TOL * max(np.abs(v).max(), scale * np.abs(x).max(), 1e-300)
    if residual > bound or np.linalg.cond(M) > MAX_CONDITION:
        return SystemSolution(singular=True, residual=residual)
    return SystemSolution(x, residual=residual)
