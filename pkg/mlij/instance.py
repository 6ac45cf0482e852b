# mlij/instance.py
import itertools
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, SizeCapError
from equinorm.utils import brute_force_cap, make_rng
from portfolio.domain import FiniteDomain

logger = logging.getLogger(__name__)

HALF_SQRT2 = math.sqrt(2.0) / 2.0


class MlijInstance:
    """
    n identical jobs on d machines with processing times p. Internally the
    machines are kept sorted by nondecreasing p; `order[j]` is the input
    index of sorted machine j.
    """

    def __init__(self, p, n):
        try:
            p = np.asarray(p, dtype=float).ravel()
        except (TypeError, ValueError):
            raise ArgumentError("processing times must be numeric")
        if p.size == 0:
            raise ArgumentError("an instance needs at least one machine")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise ArgumentError("processing times must be positive and finite")
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ArgumentError(f"job count must be a positive integer, got {n}")
        self.original_p = p
        self.order = np.argsort(p, kind="stable")
        self.p = p[self.order]
        self.n = int(n)

    @property
    def d(self):
        return self.p.size

    def to_original(self, sorted_counts):
        counts = np.zeros(self.d, dtype=np.int64)
        counts[self.order] = sorted_counts
        return counts

    def to_sorted(self, counts):
        return np.asarray(counts)[self.order]

    def is_doubling(self):
        mantissa, _ = np.frexp(self.p)
        return bool(np.all(mantissa == 0.5))

    def __str__(self):
        return f"MlijInstance(d={self.d}, n={self.n})"

    def to_json(self):
        return {"type": "mlij", "p": self.original_p.tolist(), "n": self.n}


class Schedule:
    """Jobs per machine, in the instance's input order."""

    def __init__(self, counts):
        counts = np.asarray(counts)
        if counts.ndim != 1 or counts.size == 0:
            raise ArgumentError("a schedule needs one count per machine")
        if np.any(counts < 0) or np.any(counts != np.round(counts)):
            raise ArgumentError("job counts must be nonnegative integers")
        self.counts = counts.astype(np.int64)

    @property
    def total(self):
        return int(self.counts.sum())

    def __eq__(self, other):
        return isinstance(other, Schedule) and np.array_equal(self.counts, other.counts)

    def __hash__(self):
        return hash(tuple(self.counts.tolist()))

    def __str__(self):
        return f"Schedule{tuple(self.counts.tolist())}"


def load_vector(inst, schedule):
    """x_i = n_i p_i in input order."""
    counts = schedule.counts if isinstance(schedule, Schedule) else Schedule(schedule).counts
    if counts.size != inst.d:
        raise ArgumentError(f"schedule has {counts.size} machines, instance has {inst.d}")
    if int(counts.sum()) != inst.n:
        raise ArgumentError(f"schedule places {int(counts.sum())} jobs, instance has {inst.n}")
    return counts * inst.original_p


def nearest_power_of_two(value):
    """Closest power of 2 in log scale; the geometric midpoint rounds down."""
    mantissa, exponent = math.frexp(value)
    # value = mantissa * 2^exponent with 0.5 <= mantissa < 1
    if mantissa > HALF_SQRT2:
        return math.ldexp(1.0, exponent)
    return math.ldexp(1.0, exponent - 1)


def doubling_transform(inst):
    p = [nearest_power_of_two(float(v)) for v in inst.original_p]
    return MlijInstance(p, inst.n)


def composition_count(n, d):
    return math.comb(n + d - 1, d - 1)


def iter_schedules(d, n):
    """All count vectors of n jobs over d machines (stars and bars)."""
    for bars in itertools.combinations(range(n + d - 1), d - 1):
        edges = (-1,) + bars + (n + d - 1,)
        yield tuple(edges[i + 1] - edges[i] - 1 for i in range(d))


def brute_force_schedules(inst, cap=None):
    """Load vectors of every integral schedule, labelled by their counts."""
    cap = brute_force_cap() if cap is None else cap
    total = composition_count(inst.n, inst.d)
    if total > cap:
        raise SizeCapError(
            f"{total} schedules for d={inst.d}, n={inst.n} exceed the cap {cap}", size=total, cap=cap
        )
    counts = np.array(list(iter_schedules(inst.d, inst.n)), dtype=np.int64)
    logger.debug(f"enumerated {total} schedules of {inst}")
    return FiniteDomain(counts * inst.original_p, labels=[str(tuple(c)) for c in counts.tolist()])


def intro_instance(d):
    """n = d jobs, one fast machine and d - 1 machines slower by sqrt(d)."""
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}")
    return MlijInstance([1.0] + [math.sqrt(d)] * (d - 1), d)


def example2_instance(d, n):
    """p_i = sqrt(i)."""
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}")
    return MlijInstance(np.sqrt(np.arange(1, d + 1)), n)


def random_instance(d, n, p_range=(1.0, 16.0), seed=0, doubling=False):
    lo, hi = p_range
    if not 0.0 < lo <= hi:
        raise ArgumentError(f"bad processing time range {p_range}")
    rng = make_rng(seed)
    p = np.exp(rng.uniform(math.log(lo), math.log(hi), size=d))
    if doubling:
        p = [nearest_power_of_two(v) for v in p]
    return MlijInstance(p, n)
