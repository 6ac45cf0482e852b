# norms/vectors.py
import numpy as np

from equinorm.exceptions import ArgumentError

WEIGHT_TOL = 1e-9


def as_cost_vector(x, name="cost vector"):
    """Validate a nonnegative finite vector of dimension >= 1 and return it as floats."""
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError):
        raise ArgumentError(f"{name} must be numeric")
    if arr.ndim != 1 or arr.size == 0:
        raise ArgumentError(f"{name} must be a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name} has non-finite entries")
    if np.any(arr < 0.0):
        raise ArgumentError(f"{name} has negative entries")
    return arr


def sort_desc(x):
    """x sorted decreasing; ties keep original index order."""
    x = np.asarray(x, dtype=float)
    return x[np.argsort(-x, kind="stable")]


def prefix_sums(x):
    """All top-k norms at once: entry k-1 is the sum of the k largest entries."""
    return np.cumsum(sort_desc(x))


def check_dimensions(*vectors):
    sizes = {len(v) for v in vectors}
    if len(sizes) != 1:
        raise ArgumentError(f"dimension mismatch: {sorted(sizes)}")
    return sizes.pop()


class WeightVector:
    """
    Nonincreasing, nonnegative, nonzero weights of an ordered norm. Entries
    that increase by no more than the tolerance are flattened by a running
    minimum so the stored vector is exactly nonincreasing.
    """

    def __init__(self, entries, tol=WEIGHT_TOL, label=None):
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ArgumentError(f"weight vector must be a nonempty 1-d vector, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ArgumentError("weight vector has non-finite entries")
        if np.any(arr < 0.0):
            raise ArgumentError("weight vector has negative entries")
        if not np.any(arr > 0.0):
            raise ArgumentError("weight vector must have a positive entry")
        slack = tol * (1.0 + arr.max())
        if np.any(np.diff(arr) > slack):
            raise ArgumentError("weight vector must be nonincreasing")
        self.entries = np.minimum.accumulate(arr)
        self.entries.setflags(write=False)
        self.label = label

    @classmethod
    def top_k(cls, d, k):
        if not (1 <= k <= d):
            raise ArgumentError(f"k={k} out of range 1..{d}")
        w = np.zeros(d)
        w[:k] = 1.0
        return cls(w, label=f"top-{k}")

    @classmethod
    def ones(cls, d):
        return cls(np.ones(d), label="L1")

    @classmethod
    def max_norm(cls, d):
        return cls.top_k(d, 1)

    @classmethod
    def harmonic_root(cls, d):
        """(1, 1/sqrt(2), ..., 1/sqrt(d))."""
        return cls(1.0 / np.sqrt(np.arange(1, d + 1)), label="harmonic-root")

    def __len__(self):
        return self.entries.size

    def __iter__(self):
        return iter(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, WeightVector) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __str__(self):
        if self.label:
            return f"{self.label} (d={len(self)})"
        head = ", ".join(f"{v:.4g}" for v in self.entries[:4])
        return f"w=({head}{', ...' if len(self) > 4 else ''})"

    def __repr__(self):
        return f"WeightVector({self.entries.tolist()!r})"


def as_weight_vector(w):
    return w if isinstance(w, WeightVector) else WeightVector(w)


def all_top_k(d):
    return [WeightVector.top_k(d, k) for k in range(1, d + 1)]


def sample_weight_vectors(d, count, seed=0):
    """
    Reproducible random ordered-norm weights. Shapes rotate between sorted
    uniform, power-decay, sparse prefixes and exponential draws so both flat
    and steep norms show up.
    """
    if count < 1:
        raise ArgumentError(f"sample count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    weights = []
    for i in range(count):
        shape = i % 4
        if shape == 0:
            w = np.sort(rng.random(d))[::-1]
        elif shape == 1:
            w = np.arange(1, d + 1, dtype=float) ** (-rng.uniform(0.0, 3.0))
        elif shape == 2:
            k = int(rng.integers(1, d + 1))
            w = np.concatenate([np.ones(k), np.full(d - k, rng.uniform(0.0, 0.2))])
        else:
            w = np.sort(rng.exponential(size=d))[::-1]
        if w[0] <= 0.0:
            w[0] = 1.0
            w = np.minimum.accumulate(np.maximum(w, 0.0))
        weights.append(WeightVector(w / w[0]))
    return weights
