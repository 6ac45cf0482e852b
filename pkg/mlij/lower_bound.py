# mlij/lower_bound.py
import logging

import numpy as np

from equinorm.exceptions import ArgumentError, SizeCapError
from equinorm.utils import dimension_cap
from mlij.instance import MlijInstance, load_vector
from mlij.vertices import round_good_vertex
from norms.ordered import ordered_norm
from norms.vectors import WeightVector

logger = logging.getLogger(__name__)


def _scale(alpha, L):
    """Smallest power of 2 that is at least 5 alpha L."""
    S = 2
    while S < 5.0 * alpha * L:
        S *= 2
    return S


def _dimension(S, L):
    return sum(S ** (2 * l) for l in range(L + 1))


class LowerBoundInstance:
    """
    Classes 0..L of S^(2l) machines with processing time S^l, n = S^(3L)
    jobs, and the weight vectors w(0..L-1). Unpacks as (instance, weights).
    """

    def __init__(self, alpha, S, L):
        self.alpha = alpha
        self.S = S
        self.L = L
        self.class_sizes = [S ** (2 * l) for l in range(L + 1)]
        p = np.repeat([float(S) ** l for l in range(L + 1)], self.class_sizes)
        self.instance = MlijInstance(p, S ** (3 * L))
        self.weights = [self.weight(l) for l in range(L)]

    def __iter__(self):
        return iter((self.instance, self.weights))

    def __str__(self):
        return f"lower-bound instance alpha={self.alpha} S={self.S} L={self.L} d={self.instance.d}"

    @property
    def machine_class(self):
        return np.repeat(np.arange(self.L + 1), self.class_sizes)

    def prefix(self, l):
        """Machines in classes 0..l."""
        return sum(self.class_sizes[:l + 1])

    def weight(self, l):
        S, d = float(self.S), self.instance.d
        blocks = [S ** (-2 * j) for j in range(l)]
        sizes = self.class_sizes[:l]
        entries = np.repeat(blocks, sizes) if l else np.zeros(0)
        rest = np.full(d - entries.size, S ** (-2 * l))
        return WeightVector(np.concatenate([entries, rest]), label=f"w({l})")


def lower_bound_instance(alpha, d_max=None, L=None):
    """The separating family with the largest L fitting in d_max machines, or the given L."""
    if alpha < 1.0:
        raise ArgumentError(f"alpha must be >= 1, got {alpha}")
    d_max = dimension_cap() if d_max is None else d_max
    if L is None:
        L = 1
        if _dimension(_scale(alpha, 1), 1) > d_max:
            d = _dimension(_scale(alpha, 1), 1)
            raise SizeCapError(f"even L=1 needs {d} machines, cap is {d_max}", size=d, cap=d_max)
        while _dimension(_scale(alpha, L + 1), L + 1) <= d_max:
            L += 1
    elif L < 1:
        raise ArgumentError(f"L must be >= 1, got {L}")
    S = _scale(alpha, L)
    d = _dimension(S, L)
    if d > d_max:
        raise SizeCapError(f"L={L} needs {d} machines, cap is {d_max}", size=d, cap=d_max)
    logger.info(f"lower-bound instance alpha={alpha}: L={L}, S={S}, d={d}, n=S^{3 * L}")
    return LowerBoundInstance(alpha, S, L)


class LowerBoundReport:
    def __init__(self, claim1, concentration, separation, alpha):
        self.claim1 = claim1
        self.concentration = concentration
        self.separation = separation
        self.alpha = alpha

    @property
    def violations(self):
        found = [f"claim 1 at l={row['l']}" for row in self.claim1 if not row["holds"]]
        found += [
            f"claim {row['claim']} for x({row['schedule']}) under w({row['l']})"
            for row in self.concentration if not row["holds"]
        ]
        L = self.separation.shape[0]
        for l in range(L):
            for other in range(self.separation.shape[1]):
                if other != l and not self.separation[l, other] > self.alpha:
                    found.append(f"separation of x({other}) under w({l})")
        return found

    @property
    def holds(self):
        return not self.violations

    def to_json(self):
        return {
            "claim1": self.claim1,
            "concentration": self.concentration,
            "separation": self.separation.tolist(),
            "alpha": self.alpha,
            "holds": self.holds,
        }


def check_lower_bound_claims(lb, alpha=None, tol=1e-9):
    """
    Round the vertex spread over classes 0..l for every l and measure:
    its own w(l)-norm against 2 n (l+1) S^-l; the job-concentration bounds
    (more than n/4 jobs above class l costs at least n S^(1-l) / 4 under
    w(l), more than n/4 below costs at least n S^(1-l) / 8); and the ratio
    of every other rounded vertex to it under w(l).
    """
    alpha = lb.alpha if alpha is None else alpha
    inst, S, L, n = lb.instance, float(lb.S), lb.L, lb.instance.n
    machine_class = lb.machine_class
    schedules = [round_good_vertex(inst, lb.prefix(l)) for l in range(L + 1)]
    loads = [load_vector(inst, s) for s in schedules]

    claim1, concentration = [], []
    separation = np.zeros((L, L + 1))
    for l, w in enumerate(lb.weights):
        own = ordered_norm(loads[l], w)
        bound = 2.0 * n * (l + 1) * S ** (-l)
        claim1.append({"l": l, "value": own, "bound": bound, "holds": own <= bound * (1.0 + tol)})
        for other, (schedule, x) in enumerate(zip(schedules, loads)):
            value = ordered_norm(x, w)
            separation[l, other] = value / own
            counts = inst.to_sorted(schedule.counts)
            above = int(counts[machine_class > l].sum())
            below = int(counts[machine_class < l].sum())
            if above > n / 4:
                need = n * S / 4.0 * S ** (-l)
                concentration.append({"claim": 2, "l": l, "schedule": other, "value": value,
                                      "bound": need, "holds": value >= need * (1.0 - tol)})
            if below > n / 4:
                need = n * S / 8.0 * S ** (-l)
                concentration.append({"claim": 3, "l": l, "schedule": other, "value": value,
                                      "bound": need, "holds": value >= need * (1.0 - tol)})

    report = LowerBoundReport(claim1, concentration, separation, alpha)
    if report.holds:
        logger.info(f"{lb}: all claims hold, min separation {_min_offdiag(separation):.4g}")
    else:
        logger.warning(f"{lb}: {len(report.violations)} claim violations")
    return report


def _min_offdiag(M):
    mask = np.ones_like(M, dtype=bool)
    for l in range(M.shape[0]):
        mask[l, l] = False
    return float(M[mask].min()) if mask.any() else float("inf")
