# mlij/portfolios.py
import logging

import numpy as np

from equinorm.exceptions import ArgumentError
from mlij.instance import doubling_transform, load_vector
from mlij.vertices import max_good_index, round_good_vertex, selected_indices
from norms.ordered import sym_guarantee
from portfolio.domain import Portfolio

logger = logging.getLogger(__name__)

MIN_ALPHA = 4.0 + 1e-9
LIFTING_FACTOR = 2.0
TOPK_FACTOR = 4.0


def _rounded_portfolio(inst, doubled, indices, alpha):
    vectors, provenance, details = [], [], []
    for l in indices:
        schedule = round_good_vertex(doubled, l)
        vectors.append(load_vector(inst, schedule))
        provenance.append(f"x({l})")
        details.append({"l": l, "counts": schedule.counts.tolist()})
    return Portfolio(vectors, alpha, provenance=provenance, details=details)


def build_portfolio(inst, alpha):
    """
    Rounded good vertices of the doubling instance at geometrically spaced
    indices, evaluated on the input processing times.
    """
    try:
        alpha = float(alpha)
    except (TypeError, ValueError):
        raise ArgumentError(f"alpha must be a number, got {alpha!r}")
    if not alpha > MIN_ALPHA:
        raise ArgumentError(f"alpha must exceed 4, got {alpha}")
    doubled = doubling_transform(inst)
    L = max_good_index(doubled)
    indices = selected_indices(L, alpha)

    # alpha/2 on the doubling instance, times 2 for rounding the processing times
    result = _rounded_portfolio(inst, doubled, indices, alpha)
    result.notes.append(f"factor {alpha / LIFTING_FACTOR:g} on the doubling instance, {LIFTING_FACTOR:g} for the lift")
    result.notes.append(f"Sym guarantee: {sym_guarantee(alpha, inst.d)}")
    result.notes.append(f"largest good index L={L} on the doubling instance")
    logger.info(f"MLIJ portfolio for {inst}, alpha={alpha}: L={L}, {len(result)} schedules")
    return result


def topk_two_portfolio(inst):
    """
    {x(1), x(L)} rounded. Within 4 of all rounded good vertices for every
    top-k norm, hence 8 on doubling instances and 16 in general.
    """
    doubled = doubling_transform(inst)
    L = max_good_index(doubled)
    indices = [1] if L == 1 else [1, L]
    alpha = TOPK_FACTOR * 2.0
    if not inst.is_doubling():
        alpha *= LIFTING_FACTOR
    result = _rounded_portfolio(inst, doubled, indices, alpha)
    result.notes.append("top-k guarantee only")
    logger.info(f"top-k portfolio for {inst}: L={L}, {len(result)} schedules")
    return result


def schedules_of(portfolio):
    return [np.asarray(det["counts"]) for det in portfolio.details]
