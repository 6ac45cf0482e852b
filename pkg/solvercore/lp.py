# solvercore/lp.py
import logging

import numpy as np

from equinorm.exceptions import ArgumentError, NumericError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
FEASIBILITY_TOL = 1e-8
TRACE_LENGTH = 25

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LinearProgram:
    """
    A dense LP: optimize c.x subject to A_ub x <= b_ub, A_eq x = b_eq and
    per-variable bounds (lo, hi), where None means unbounded on that side.
    Variables default to x >= 0.
    """

    def __init__(self, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
                 bounds=None, sense="min"):
        self.c = np.asarray(c, dtype=float).ravel()
        n = self.c.size
        if n == 0:
            raise ArgumentError("a linear program needs at least one variable")
        if sense not in ("min", "max"):
            raise ArgumentError(f"sense must be 'min' or 'max', got {sense!r}")
        self.sense = sense
        self.A_ub, self.b_ub = self._rows(A_ub, b_ub, n, "inequality")
        self.A_eq, self.b_eq = self._rows(A_eq, b_eq, n, "equality")
        if bounds is None:
            bounds = [(0.0, None)] * n
        elif len(bounds) != n:
            raise ArgumentError(f"expected {n} bounds, got {len(bounds)}")
        self.bounds = [(lo, hi) for lo, hi in bounds]
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise ArgumentError(f"empty variable bound [{lo}, {hi}]")
        if not np.all(np.isfinite(self.c)):
            raise ArgumentError("objective coefficients must be finite")

    @staticmethod
    def _rows(A, b, n, kind):
        if A is None:
            return np.zeros((0, n)), np.zeros(0)
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.shape[1] != n or A.shape[0] != b.size:
            raise ArgumentError(
                f"{kind} rows have shape {A.shape} and rhs {b.size}, expected (*, {n})"
            )
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ArgumentError(f"{kind} coefficients must be finite")
        return A, b

    @property
    def num_variables(self):
        return self.c.size

    def __str__(self):
        return (
            f"LP({self.sense}, {self.num_variables} vars, "
            f"{self.A_ub.shape[0]} <=, {self.A_eq.shape[0]} =)"
        )


class LpResult:
    def __init__(self, status, x=None, value=None, iterations=0):
        self.status = status
        self.x = x
        self.value = value
        self.iterations = iterations

    @property
    def is_optimal(self):
        return self.status == OPTIMAL

    def __str__(self):
        if self.is_optimal:
            return f"optimal value={self.value:.10g} after {self.iterations} pivots"
        return self.status


def _standard_form(lp):
    """
    Rewrite as min c'.y, M y = rhs, y >= 0 with x = shift + T y.
    Returns (c', M, rhs, shift, T).
    """
    n = lp.num_variables
    columns = []
    shift = np.zeros(n)
    extra_ub_rows = []
    for j, (lo, hi) in enumerate(lp.bounds):
        unit = np.zeros(n)
        unit[j] = 1.0
        if lo is not None:
            shift[j] = lo
            columns.append(unit)
            if hi is not None:
                extra_ub_rows.append((len(columns) - 1, hi - lo))
        elif hi is not None:
            shift[j] = hi
            columns.append(-unit)
        else:
            columns.append(unit)
            columns.append(-unit)
    T = np.column_stack(columns)
    m = T.shape[1]

    A_ub = lp.A_ub @ T
    b_ub = lp.b_ub - lp.A_ub @ shift
    if extra_ub_rows:
        rows = np.zeros((len(extra_ub_rows), m))
        rhs = np.zeros(len(extra_ub_rows))
        for r, (col, cap) in enumerate(extra_ub_rows):
            rows[r, col] = 1.0
            rhs[r] = cap
        A_ub = np.vstack([A_ub, rows])
        b_ub = np.concatenate([b_ub, rhs])
    A_eq = lp.A_eq @ T
    b_eq = lp.b_eq - lp.A_eq @ shift

    n_ub = A_ub.shape[0]
    n_eq = A_eq.shape[0]
    M = np.zeros((n_ub + n_eq, m + n_ub))
    M[:n_ub, :m] = A_ub
    M[:n_ub, m:] = np.eye(n_ub)
    M[n_ub:, :m] = A_eq
    rhs = np.concatenate([b_ub, b_eq])

    sign = 1.0 if lp.sense == "min" else -1.0
    cost = np.zeros(m + n_ub)
    cost[:m] = sign * (lp.c @ T)
    return cost, M, rhs, shift, T


def _pivot(tableau, row, col):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(tableau, basis, columns, trace, phase):
    """Minimize the last tableau row over the allowed columns; Dantzig, then Bland."""
    m = tableau.shape[0] - 1
    bland_after = 10 * (m + len(columns))
    max_iterations = 50 * (m + len(columns)) + 1000
    columns = np.asarray(columns)
    for iteration in range(max_iterations):
        reduced = tableau[-1, columns]
        if iteration < bland_after:
            pick = int(np.argmin(reduced))
            if reduced[pick] >= -PIVOT_TOL:
                return OPTIMAL, iteration
        else:
            negative = np.flatnonzero(reduced < -PIVOT_TOL)
            if negative.size == 0:
                return OPTIMAL, iteration
            pick = int(negative[0])
        col = int(columns[pick])

        entries = tableau[:m, col]
        positive = entries > PIVOT_TOL
        if not positive.any():
            return UNBOUNDED, iteration
        ratios = np.full(m, np.inf)
        ratios[positive] = tableau[:m, -1][positive] / entries[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + PIVOT_TOL * (1.0 + abs(best)))
        row = int(min(ties, key=lambda i: basis[i]))

        _pivot(tableau, row, col)
        basis[row] = col
        trace.append((phase, iteration, col, row, float(-tableau[-1, -1])))
        del trace[:-TRACE_LENGTH]
    raise NumericError(
        f"simplex phase {phase} did not converge in {max_iterations} pivots", trace
    )


def solve_lp(lp):
    """Two-phase dense tableau simplex."""
    cost, M, rhs, shift, T = _standard_form(lp)
    rows, cols = M.shape

    negative = rhs < 0
    M[negative] *= -1.0
    rhs[negative] *= -1.0

    # Phase I: one artificial per row
    tableau = np.zeros((rows + 1, cols + rows + 1))
    tableau[:rows, :cols] = M
    tableau[:rows, cols:cols + rows] = np.eye(rows)
    tableau[:rows, -1] = rhs
    tableau[-1, :cols] = -M.sum(axis=0)
    tableau[-1, -1] = -rhs.sum()
    basis = list(range(cols, cols + rows))
    trace = []

    status, it1 = _run_simplex(tableau, basis, range(cols + rows), trace, phase=1)
    if status != OPTIMAL:
        logger.error(f"phase I ended {status} on {lp}")
        raise NumericError(f"phase I of {lp} ended {status}", trace)
    infeasibility = -tableau[-1, -1]
    if infeasibility > FEASIBILITY_TOL * (1.0 + rhs.sum()):
        logger.debug(f"{lp} infeasible, residual {infeasibility:.3g}")
        return LpResult(INFEASIBLE, iterations=it1)

    # Drive artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(rows):
        if basis[r] < cols:
            keep.append(r)
            continue
        candidates = np.flatnonzero(np.abs(tableau[r, :cols]) > PIVOT_TOL)
        if candidates.size:
            col = int(candidates[0])
            _pivot(tableau, r, col)
            basis[r] = col
            keep.append(r)
    tableau = np.vstack([tableau[keep], tableau[-1:]])
    basis = [basis[r] for r in keep]

    # Phase II objective row
    tableau[-1, :] = 0.0
    tableau[-1, :cols] = cost
    for r, b in enumerate(basis):
        if tableau[-1, b] != 0.0:
            tableau[-1] -= tableau[-1, b] * tableau[r]
    status, it2 = _run_simplex(tableau, basis, range(cols), trace, phase=2)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, iterations=it1 + it2)

    y = np.zeros(cols + rows)
    for r, b in enumerate(basis):
        y[b] = tableau[r, -1]
    x = shift + T @ y[:T.shape[1]]
    value = float(lp.c @ x)
    if not np.all(np.isfinite(x)):
        raise NumericError(f"non-finite solution for {lp}", trace)
    logger.debug(f"{lp} solved: value {value:.10g}, {it1 + it2} pivots")
    return LpResult(OPTIMAL, x=x, value=value, iterations=it1 + it2)
