# cli/instances.py
"""Instance files: loading by "type" and the generators behind `manage.py generate`."""
import json
import logging

from clustering.forms import metric_from_json
from clustering.metric import Metric, random_metric, star_metric
from covering.forms import polyhedron_from_json
from covering.polyhedron import CoveringPolyhedron, random_covering
from equinorm.exceptions import ArgumentError
from mlij.forms import instance_from_json
from mlij.instance import MlijInstance, example2_instance, intro_instance, random_instance
from mlij.lower_bound import lower_bound_instance
from norms.vectors import WeightVector
from portfolio.domain import FiniteDomain
from portfolio.forms import domain_from_json
from portfolio.hard_instances import antichain_hard_instance, example1_domain
from satisfaction.forms import PROBLEM_FORMS, problem_from_json
from satisfaction.gadgets import ct_lower_bound_instance, vc_lower_bound_instance
from satisfaction.problems import (
    SatisfactionProblem,
    random_completion_times,
    random_set_cover,
    random_tsp,
    random_vertex_cover,
)

logger = logging.getLogger(__name__)


class LoadedInstance:
    """A parsed instance file plus the weight vectors some generators attach."""

    def __init__(self, obj, weights=None, source=None):
        self.obj = obj
        self.weights = list(weights or [])
        self.source = source

    @property
    def kind(self):
        if isinstance(self.obj, FiniteDomain):
            return "domain"
        if isinstance(self.obj, MlijInstance):
            return "mlij"
        if isinstance(self.obj, CoveringPolyhedron):
            return "covering"
        if isinstance(self.obj, Metric):
            return "metric"
        return self.obj.kind

    def describe(self):
        """Short descriptor for reports."""
        info = {"type": self.kind, "source": self.source, "summary": str(self.obj)}
        if self.weights:
            info["weights"] = len(self.weights)
        return info


LOADERS = {
    "domain": domain_from_json,
    "mlij": instance_from_json,
    "covering": polyhedron_from_json,
    "metric": metric_from_json,
}
LOADERS.update({kind: problem_from_json for kind in PROBLEM_FORMS})


def load_instance(data, source=None):
    if not isinstance(data, dict):
        raise ArgumentError("an instance file must hold a JSON object")
    kind = data.get("type", "domain" if "vectors" in data else None)
    if kind not in LOADERS:
        raise ArgumentError(f"unknown instance type {kind!r}; choose from {sorted(LOADERS)}")
    obj = LOADERS[kind](data)
    raw_weights = data.get("weights") or []
    try:
        weights = [WeightVector(w) for w in raw_weights]
    except (TypeError, ValueError):
        raise ArgumentError("weights must be a list of weight vectors")
    return LoadedInstance(obj, weights, source)


def read_json(path):
    try:
        with open(path, 'r', encoding='utf-8') as file:
            return json.load(file)
    except FileNotFoundError:
        raise ArgumentError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise ArgumentError(f"invalid JSON in {path}: {e}")


def read_instance(path):
    return load_instance(read_json(path), source=str(path))


def _param(params, name, default):
    value = params.get(name)
    return default if value is None else value


def _with_weights(data, weights, **extra):
    data["weights"] = [w.entries.tolist() for w in weights]
    data.update(extra)
    return data


def _mlij_lower_bound(params):
    lb = lower_bound_instance(_param(params, "alpha", 5.0), L=_param(params, "L", 1))
    return _with_weights(lb.instance.to_json(), lb.weights, S=lb.S, L=lb.L, alpha=lb.alpha)


def _antichain(params):
    found = antichain_hard_instance(_param(params, "L", 3), _param(params, "S", 4))
    return _with_weights(found.domain.to_json(), found.weights, S=found.S, L=found.L)


def _example1(params):
    d = _param(params, "d", 64)
    data = example1_domain(d, _param(params, "z_scale", "asymptotic")).to_json()
    return _with_weights(data, [WeightVector.harmonic_root(d)])


GENERATORS = {
    "mlij-lb": _mlij_lower_bound,
    "antichain": _antichain,
    "example1": _example1,
    "example2": lambda params: example2_instance(_param(params, "d", 8), _param(params, "n", 16)).to_json(),
    "mlij-intro": lambda params: intro_instance(_param(params, "d", 16)).to_json(),
    "vc-98": lambda params: vc_lower_bound_instance(_param(params, "n", 8)).to_json(),
    "ct-113": lambda params: ct_lower_bound_instance().to_json(),
    "star-metric": lambda params: star_metric(_param(params, "n", 16)).to_json(),
    "random-mlij": lambda params: random_instance(
        _param(params, "d", 4), _param(params, "n", 8), seed=_param(params, "seed", 0)).to_json(),
    "random-covering": lambda params: random_covering(
        _param(params, "r", 2), _param(params, "d", 5), seed=_param(params, "seed", 0)).to_json(),
    "random-metric": lambda params: random_metric(_param(params, "n", 8), seed=_param(params, "seed", 0)).to_json(),
    "random-setcover": lambda params: random_set_cover(
        _param(params, "n", 8), _param(params, "m", 5), seed=_param(params, "seed", 0)).to_json(),
    "random-ct": lambda params: random_completion_times(
        _param(params, "n", 4), _param(params, "d", 2), seed=_param(params, "seed", 0)).to_json(),
    "random-vc": lambda params: random_vertex_cover(
        _param(params, "n", 6), _param(params, "m", 7), seed=_param(params, "seed", 0)).to_json(),
    "random-tsp": lambda params: random_tsp(_param(params, "n", 5), seed=_param(params, "seed", 0)).to_json(),
}


def generate(kind, **params):
    """Instance JSON for a generator kind; unset parameters take the generator's default."""
    try:
        builder = GENERATORS[kind]
    except KeyError:
        raise ArgumentError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    data = builder(params)
    data["generator"] = {"kind": kind, **{k: v for k, v in params.items() if v is not None}}
    logger.info(f"generated {kind} instance of type {data.get('type', 'domain')}")
    return data


def is_satisfaction(instance):
    return isinstance(instance.obj, SatisfactionProblem)
