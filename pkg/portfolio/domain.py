# portfolio/domain.py
import numpy as np

from equinorm.exceptions import ArgumentError
from norms.vectors import WeightVector, all_top_k, as_cost_vector, sample_weight_vectors


def _as_matrix(vectors, name):
    if len(vectors) == 0:
        raise ArgumentError(f"{name} must be nonempty")
    rows = [as_cost_vector(v, name=f"{name} vector") for v in vectors]
    sizes = {r.size for r in rows}
    if len(sizes) != 1:
        raise ArgumentError(f"{name} vectors have mixed dimensions {sorted(sizes)}")
    return np.vstack(rows)


class FiniteDomain:
    """A finite set of feasible cost vectors of one dimension."""

    def __init__(self, vectors, labels=None):
        self.matrix = _as_matrix(vectors, "domain")
        if labels is not None and len(labels) != len(self.matrix):
            raise ArgumentError(f"{len(labels)} labels for {len(self.matrix)} vectors")
        self.labels = list(labels) if labels is not None else [f"v{i}" for i in range(len(self.matrix))]

    @property
    def dimension(self):
        return self.matrix.shape[1]

    def __len__(self):
        return self.matrix.shape[0]

    def __iter__(self):
        return iter(self.matrix)

    def __getitem__(self, i):
        return self.matrix[i]

    def __str__(self):
        return f"FiniteDomain({len(self)} vectors, d={self.dimension})"

    def to_json(self):
        return {
            "type": "domain",
            "vectors": self.matrix.tolist(),
            "labels": self.labels,
        }


class Portfolio:
    """
    Candidate solutions with provenance. claimed_alpha is either a number >= 1
    or a symbolic string for guarantees with unknown constants.
    """

    def __init__(self, vectors, claimed_alpha, provenance=None, details=None, notes=None):
        self.matrix = _as_matrix(vectors, "portfolio")
        if isinstance(claimed_alpha, str):
            self.claimed_alpha = claimed_alpha
        else:
            claimed_alpha = float(claimed_alpha)
            if not claimed_alpha >= 1.0:
                raise ArgumentError(f"claimed alpha must be >= 1, got {claimed_alpha}")
            self.claimed_alpha = claimed_alpha
        n = len(self.matrix)
        self.provenance = list(provenance) if provenance is not None else ["" for _ in range(n)]
        self.details = list(details) if details is not None else [{} for _ in range(n)]
        if len(self.provenance) != n or len(self.details) != n:
            raise ArgumentError("provenance and details must match the number of vectors")
        self.notes = list(notes or [])

    @property
    def dimension(self):
        return self.matrix.shape[1]

    @property
    def numeric_alpha(self):
        return self.claimed_alpha if isinstance(self.claimed_alpha, float) else None

    def __len__(self):
        return self.matrix.shape[0]

    def __iter__(self):
        return iter(self.matrix)

    def __str__(self):
        alpha = self.claimed_alpha if isinstance(self.claimed_alpha, str) else f"{self.claimed_alpha:g}"
        return f"Portfolio({len(self)} vectors, d={self.dimension}, alpha={alpha})"

    def to_json(self):
        return {
            "type": "portfolio",
            "claimed_alpha": self.claimed_alpha,
            "vectors": self.matrix.tolist(),
            "provenance": self.provenance,
            "details": self.details,
            "notes": self.notes,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            data["vectors"],
            data["claimed_alpha"],
            provenance=data.get("provenance"),
            details=data.get("details"),
            notes=data.get("notes"),
        )

    def as_domain(self):
        return FiniteDomain(self.matrix, labels=self.provenance)


ALL_TOP_K = "all_top_k"
ORDERED_SET = "ordered_set"
ORDERED_SAMPLED = "ordered_sampled"


class NormFamily:
    """Which ordered norms a certificate ranges over."""

    def __init__(self, kind, weights=None, count=None, seed=0):
        if kind == ORDERED_SET and not weights:
            raise ArgumentError("an ordered set family needs at least one weight vector")
        if kind == ORDERED_SAMPLED and (count is None or count < 1):
            raise ArgumentError(f"sample count must be >= 1, got {count}")
        if kind not in (ALL_TOP_K, ORDERED_SET, ORDERED_SAMPLED):
            raise ArgumentError(f"unknown norm family {kind!r}")
        self.kind = kind
        self.weights = [w if isinstance(w, WeightVector) else WeightVector(w) for w in (weights or [])]
        self.count = count
        self.seed = seed

    @classmethod
    def all_top_k(cls):
        return cls(ALL_TOP_K)

    @classmethod
    def ordered_set(cls, weights):
        return cls(ORDERED_SET, weights=weights)

    @classmethod
    def ordered_sampled(cls, count, seed=0):
        return cls(ORDERED_SAMPLED, count=count, seed=seed)

    def weight_vectors(self, d):
        if self.kind == ALL_TOP_K:
            return all_top_k(d)
        if self.kind == ORDERED_SET:
            for w in self.weights:
                if len(w) != d:
                    raise ArgumentError(f"weight vector of length {len(w)} for dimension {d}")
            return list(self.weights)
        return sample_weight_vectors(d, self.count, self.seed)

    def __str__(self):
        if self.kind == ORDERED_SAMPLED:
            return f"{self.kind}(count={self.count}, seed={self.seed})"
        if self.kind == ORDERED_SET:
            return f"{self.kind}({len(self.weights)} weights)"
        return self.kind
