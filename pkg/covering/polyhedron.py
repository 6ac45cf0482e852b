# covering/polyhedron.py
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, InfeasibleError
from equinorm.utils import check_epsilon, make_rng

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-9


class CoveringPolyhedron:
    """{x >= 0 : A x >= 1} with A >= 0 and no all-zero row."""

    def __init__(self, A):
        try:
            A = np.atleast_2d(np.asarray(A, dtype=float))
        except (TypeError, ValueError):
            raise ArgumentError("constraint matrix must be numeric")
        if A.ndim != 2 or A.size == 0:
            raise ArgumentError(f"constraint matrix must be a nonempty r x d matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)) or np.any(A < 0.0):
            raise ArgumentError("constraint matrix must be finite and nonnegative")
        empty = np.flatnonzero(~np.any(A > 0.0, axis=1))
        if empty.size:
            raise InfeasibleError(f"rows {empty.tolist()} have no positive entry")
        self.A = A

    @property
    def r(self):
        return self.A.shape[0]

    @property
    def d(self):
        return self.A.shape[1]

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -tol) and np.all(self.A @ x >= 1.0 - tol * (1.0 + np.abs(x).sum())))

    def __str__(self):
        return f"CoveringPolyhedron(r={self.r}, d={self.d})"

    def to_json(self):
        return {"type": "covering", "A": self.A.tolist(), "b": [1.0] * self.r}


def normalize(A, b=None):
    """Drop rows with b_i = 0 and divide the rest by b_i."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.ones(A.shape[0]) if b is None else np.asarray(b, dtype=float).ravel()
    if b.size != A.shape[0]:
        raise ArgumentError(f"{b.size} right-hand sides for {A.shape[0]} rows")
    if not np.all(np.isfinite(b)) or np.any(b < 0.0):
        raise ArgumentError("right-hand side must be finite and nonnegative")
    keep = b > 0.0
    if not keep.any():
        raise ArgumentError("every right-hand side is zero; nothing to cover")
    if not keep.all():
        logger.debug(f"dropped {int((~keep).sum())} rows with zero right-hand side")
    return CoveringPolyhedron(A[keep] / b[keep, None])


def sparsify(P, eps):
    """
    Per row: entries below a*/mu become 0, the rest snap down to the grid
    (a*/mu)(1+eps/2)^l with mu = 3 d^2 / eps.
    """
    eps = check_epsilon(eps)
    d = P.d
    mu = 3.0 * d * d / eps
    q = 1.0 + eps / 2.0
    top = math.floor(math.log(mu) / math.log(q))
    out = np.zeros_like(P.A)
    for i, row in enumerate(P.A):
        base = row.max() / mu
        for j, a in enumerate(row):
            if a < base:
                continue
            l = min(max(int(math.floor(math.log(a / base) / math.log(q))), 0), top)
            while l > 0 and base * q ** l > a:
                l -= 1
            while l < top and base * q ** (l + 1) <= a:
                l += 1
            out[i, j] = base * q ** l
    return CoveringPolyhedron(out)


def witness(P, x, eps):
    """(1+eps/2)(x + eps ||x||_1 / (3d)), a point of the sparsified polyhedron near x."""
    eps = check_epsilon(eps)
    x = np.asarray(x, dtype=float)
    return (1.0 + eps / 2.0) * (x + eps * x.sum() / (3.0 * P.d))


def distinct_row_values(P):
    """Largest number of distinct values (0 included when present) in any row."""
    return max(np.unique(row).size for row in P.A)


def row_value_bound(d, eps):
    """Grid levels plus zero."""
    mu = 3.0 * d * d / eps
    return math.floor(math.log(mu) / math.log(1.0 + eps / 2.0)) + 2


class ColumnGroups:
    """Partition of the columns into classes of identical columns, by first occurrence."""

    def __init__(self, groups, d):
        self.groups = [list(g) for g in groups]
        self.label = np.empty(d, dtype=np.int64)
        for l, members in enumerate(self.groups):
            self.label[members] = l
        self.reps = np.array([g[0] for g in self.groups], dtype=np.int64)
        self.sizes = np.array([len(g) for g in self.groups], dtype=float)

    @property
    def m(self):
        return len(self.groups)

    def expand(self, z):
        return np.asarray(z, dtype=float)[self.label]

    def __len__(self):
        return self.m

    def __str__(self):
        return f"{self.m} column groups of sizes {self.sizes.astype(int).tolist()}"


def group_columns(P):
    index = {}
    for j, column in enumerate(P.A.T):
        index.setdefault(tuple(column.tolist()), []).append(j)
    return ColumnGroups(index.values(), P.d)


def reduced_polyhedron(P, groups):
    """Covering polyhedron in group coordinates z: column l is A_rep(l) times |S_l|."""
    return CoveringPolyhedron(P.A[:, groups.reps] * groups.sizes)


def reduced_order_of(x, groups):
    """Group order realised by x, ties by group index."""
    x = np.asarray(x, dtype=float)
    z = np.array([x[g].mean() for g in groups.groups])
    return tuple(np.argsort(-z, kind="stable").tolist())


def satisfies_order(z, order, tol=1e-6):
    z = np.asarray(z, dtype=float)[list(order)]
    scale = tol * (1.0 + np.abs(z).max())
    return bool(np.all(np.diff(z) <= scale) and z[-1] >= -scale)


def example_polyhedron():
    """x1 >= 2, x2 + x3 >= 4, 2 x1 + x2 + x3 >= 10."""
    return normalize([[1, 0, 0], [0, 1, 1], [2, 1, 1]], [2, 4, 10])


def random_covering(r, d, seed=0, density=0.7):
    rng = make_rng(seed)
    A = rng.uniform(0.05, 1.0, size=(r, d)) * (rng.random((r, d)) < density)
    for i in range(r):
        if not A[i].any():
            A[i, int(rng.integers(d))] = 1.0
    return CoveringPolyhedron(A)
