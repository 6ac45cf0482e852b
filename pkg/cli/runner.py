# cli/runner.py
"""Dispatch from loaded instances to portfolio builders and certificates."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor

from clustering.certificates import (
    k_subsets_domain,
    kclustering_lower_bound,
    ufl_lower_bound,
    ufl_ratio_table,
)
from clustering.iterative import guarantee, iterative_clustering, ufl_portfolio
from clustering.metric import distance_vector
from clustering.partial import EXACT as EXACT_MODE
from covering.portfolios import build_portfolio as covering_portfolio
from covering.portfolios import lp_min_ordered_norm
from equinorm.exceptions import ArgumentError, SizeCapError
from equinorm.utils import safe_ratio
from mlij.instance import brute_force_schedules
from mlij.portfolios import build_portfolio as mlij_portfolio
from mlij.portfolios import topk_two_portfolio
from mlij.vertices import balanced_load_bound, lp_relaxation
from norms.ordered import ordered_norm
from norms.vectors import all_top_k, sample_weight_vectors
from portfolio.bucket import bucket_portfolio
from portfolio.domain import FiniteDomain, NormFamily, Portfolio
from portfolio.oracles import certify_topk_ratio, estimate_ordered_ratio, min_norms, ratio_table
from satisfaction.certificates import earliest_satisfaction_vector, satisfaction_domain
from satisfaction.satisfiers import ORACLES, order_problem
from solvercore.arrangement import AUTO

from cli.reports import EXACT, MEASURED, SAMPLED, certificate

logger = logging.getLogger(__name__)

RELAXATION = "relaxation"
RELAXATION_MAX_MACHINES = 32

DEFAULT_ALPHA = 8.0
DEFAULT_EPS = 0.5
DEFAULT_K = 2

METHODS = {
    "domain": ["bucket"],
    "mlij": ["portfolio", "topk"],
    "covering": ["portfolio"],
    "metric": ["clustering", "ufl"],
}
SATISFACTION_METHODS = sorted(ORACLES)


def methods_for(kind):
    return METHODS.get(kind, SATISFACTION_METHODS)


def _check_method(kind, method):
    allowed = methods_for(kind)
    if method is None:
        return allowed[0]
    if method not in allowed:
        raise ArgumentError(f"method {method!r} does not apply to {kind} instances; choose from {allowed}")
    return method


def _clustering_portfolio(metric, k, eps, mode, cap):
    found = iterative_clustering(metric, k, eps, mode, cap)
    return Portfolio(
        [distance_vector(metric, found)],
        guarantee(eps, mode),
        provenance=[found.provenance],
        details=[{"open": list(found), "k": k, "mode": mode, "radii": len(found.rounds)}],
        notes=[f"bicriteria: {len(found)} facilities open against k={k}"],
    )


def solve_instance(instance, method=None, alpha=None, eps=None, k=None, mode=None,
                   arrangement_samples=100_000, seed=0, cluster_cap=None):
    """Build the portfolio a method produces for the instance. cluster_cap bounds C(n, k) in exact clustering."""
    kind = instance.kind
    method = _check_method(kind, method)
    obj = instance.obj
    eps = DEFAULT_EPS if eps is None else eps
    if kind == "domain":
        return bucket_portfolio(obj, eps)
    if kind == "mlij":
        if method == "topk":
            return topk_two_portfolio(obj)
        return mlij_portfolio(obj, DEFAULT_ALPHA if alpha is None else alpha)
    if kind == "covering":
        return covering_portfolio(obj, eps, mode=AUTO, samples=arrangement_samples, seed=seed)
    if kind == "metric":
        if method == "ufl":
            return ufl_portfolio(obj, cluster_cap)
        k = DEFAULT_K if k is None else k
        return _clustering_portfolio(obj, k, eps, mode or EXACT_MODE, cluster_cap)
    return order_problem(obj, method).as_portfolio()


def _reference_domain(instance, portfolio, cap):
    obj = instance.obj
    if instance.kind == "domain":
        return obj
    if instance.kind == "mlij":
        return brute_force_schedules(obj, cap)
    if instance.kind == "metric":
        subsets, M = k_subsets_domain(obj, portfolio.details[0]["k"], cap)
        return FiniteDomain(M, labels=[str(list(F)) for F in subsets])
    return satisfaction_domain(obj, cap)


def _finite_certificates(instance, X, D, samples, seed):
    found = [
        certificate("top-k", EXACT, certify_topk_ratio(X, D)),
        certificate(
            "ordered", SAMPLED,
            estimate_ordered_ratio(X, D, NormFamily.ordered_sampled(samples, seed)),
            samples=samples, seed=seed,
        ),
    ]
    weights = [w for w in instance.weights if len(w) == D.dimension]
    if weights:
        ratios = [ratio for _, ratio in ratio_table(X, D, weights)]
        found.append(certificate("given weights", EXACT, max(ratios), weights=len(weights)))
    return found


def _lp_ratio(X, weights, optima):
    best = min_norms(X.matrix, weights)
    return max(safe_ratio(float(b), float(o)) for b, o in zip(best, optima))


def _covering_certificates(P, X, samples, seed):
    topk = all_top_k(P.d)
    sampled = sample_weight_vectors(P.d, samples, seed)
    return [
        certificate("top-k", EXACT, _lp_ratio(X, topk, [lp_min_ordered_norm(P, w)[1] for w in topk])),
        certificate("ordered", SAMPLED, _lp_ratio(X, sampled, [lp_min_ordered_norm(P, w)[1] for w in sampled]),
                    samples=samples, seed=seed),
    ]


def _ufl_certificates(metric, X, samples, seed, cap):
    n = metric.n
    topk = ufl_ratio_table(metric, X, all_top_k(n), cap)
    sampled = ufl_ratio_table(metric, X, sample_weight_vectors(n, samples, seed), cap)
    return [
        certificate("top-k", MEASURED, max(r for _, r in topk)),
        certificate("ordered", MEASURED, max(r for _, r in sampled), samples=samples, seed=seed),
    ]


def _relaxation_certificates(inst, X):
    topk = all_top_k(inst.d)
    return [certificate("top-k", RELAXATION, _lp_ratio(X, topk, [lp_relaxation(inst, w)[1] for w in topk]))]


def _lower_bounds(instance, portfolio, weights):
    """Per weight vector, a value no feasible solution beats, found without enumeration."""
    obj = instance.obj
    if instance.kind == "mlij":
        if obj.d <= RELAXATION_MAX_MACHINES:
            return [lp_relaxation(obj, w)[1] for w in weights]
        return [balanced_load_bound(obj, w) for w in weights]
    if instance.kind == "metric":
        if "k" in portfolio.details[0]:
            return [kclustering_lower_bound(obj, portfolio.details[0]["k"], w) for w in weights]
        return [ufl_lower_bound(obj, w) for w in weights]
    floor = earliest_satisfaction_vector(obj)
    return [ordered_norm(floor, w) for w in weights]


def _bounded_certificate(instance, X, samples, seed, tag=SAMPLED):
    weights = sample_weight_vectors(X.dimension, samples, seed)
    bounds = _lower_bounds(instance, X, weights)
    if instance.kind == "metric" and "k" not in X.details[0]:
        best = [
            min(len(d["open"]) + ordered_norm(row, w) for row, d in zip(X.matrix, X.details))
            for w in weights
        ]
        ratio = max(safe_ratio(b, float(o)) for b, o in zip(best, bounds))
    else:
        ratio = _lp_ratio(X, weights, bounds)
    return certificate("ordered", tag, ratio, samples=samples, seed=seed, reference="lower bound")


def _capped(instance, X, samples, seed, error, tag=SAMPLED):
    logger.warning(f"exhaustive reference skipped, sampling against lower bounds: {error}")
    notes = [
        f"exact certificates skipped: {error}",
        "ordered ratios sampled against per-norm lower bounds, so they may overstate the true ratios",
    ]
    found = []
    if instance.kind == "mlij" and instance.obj.d <= RELAXATION_MAX_MACHINES:
        notes.append("top-k ratio bounded against the LP relaxation instead")
        found = _relaxation_certificates(instance.obj, X)
    found.append(_bounded_certificate(instance, X, samples, seed, tag))
    return found, notes


def certify(instance, portfolio, samples=200, seed=0, cap=None):
    """
    (certificates, notes) for a portfolio: exact top-k ratio and a sampled
    ordered-norm ratio against the instance's exhaustive optimum. When the
    exhaustive reference exceeds its cap the exact certificates are skipped
    and the sampled ratio is taken against lower bounds on each optimum.
    """
    kind = instance.kind
    if portfolio.dimension != _dimension(instance):
        raise ArgumentError(
            f"portfolio vectors have dimension {portfolio.dimension}, instance needs {_dimension(instance)}"
        )
    if kind == "covering":
        return _covering_certificates(instance.obj, portfolio, samples, seed), []
    if kind == "metric" and "k" not in portfolio.details[0]:
        try:
            return _ufl_certificates(instance.obj, portfolio, samples, seed, cap), [
                "facility location ratios are measured; the guarantee is asymptotic"
            ]
        except SizeCapError as e:
            return _capped(instance, portfolio, samples, seed, e, tag=MEASURED)
    try:
        D = _reference_domain(instance, portfolio, cap)
    except SizeCapError as e:
        return _capped(instance, portfolio, samples, seed, e)
    return _finite_certificates(instance, portfolio, D, samples, seed), []


def _dimension(instance):
    obj = instance.obj
    if instance.kind == "domain":
        return obj.dimension
    if instance.kind == "mlij":
        return obj.d
    if instance.kind == "covering":
        return obj.d
    if instance.kind == "metric":
        return obj.n
    return obj.num_clients


def sweep_parameter(kind):
    if kind == "mlij":
        return "alpha"
    if kind in METHODS:
        return "eps"
    raise ArgumentError(f"{kind} instances have no approximation parameter to sweep")


def _ratio_of(certificates, family, tag):
    for c in certificates:
        if c["family"] == family and c["tag"] == tag:
            return c["ratio"]
    return None


def tradeoff_rows(instance, values, method=None, k=None, mode=None, samples=200, seed=0, cap=None,
                  arrangement_samples=100_000, jobs=1):
    """One row per swept value, in input order whatever the completion order."""
    name = sweep_parameter(instance.kind)

    def cell(value):
        started = time.perf_counter()
        portfolio = solve_instance(instance, method, k=k, mode=mode, seed=seed,
                                   arrangement_samples=arrangement_samples, **{name: value})
        found, _ = certify(instance, portfolio, samples=samples, seed=seed, cap=cap)
        return {
            "param": value,
            "portfolio_size": len(portfolio),
            "exact_topk_ratio": _ratio_of(found, "top-k", EXACT),
            "sampled_ord_ratio": _ratio_of(found, "ordered", SAMPLED),
            "seconds": time.perf_counter() - started,
        }

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            rows = list(executor.map(cell, values))
    else:
        rows = [cell(v) for v in values]
    logger.info(f"trade-off over {name}: {len(rows)} rows")
    return rows
