# cli/reports.py
import json
import math

import numpy as np
from django.core.exceptions import ValidationError

from equinorm.exceptions import (
    CertificateViolation,
    InfeasibleError,
    NonterminationError,
    NumericError,
    PreconditionError,
    SizeCapError,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SIZE_CAP = 3
EXIT_CERTIFICATE = 4
EXIT_NUMERIC = 5

EXACT = "exact"
SAMPLED = "sampled"
MEASURED = "measured"

VIOLATION_TOL = 1e-6

FAMILIES = {
    "all": None,
    "top": {"top-k"},
    "ord": {"ordered", "given weights"},
}


def returncode_for(exc):
    if isinstance(exc, (ValidationError, InfeasibleError, PreconditionError)):
        return EXIT_VALIDATION
    if isinstance(exc, SizeCapError):
        return EXIT_SIZE_CAP
    if isinstance(exc, CertificateViolation):
        return EXIT_CERTIFICATE
    if isinstance(exc, (NumericError, NonterminationError)):
        return EXIT_NUMERIC
    return None


def error_message(exc):
    if isinstance(exc, ValidationError):
        return "; ".join(exc.messages)
    return str(exc)


def jsonable(value):
    """Plain JSON values; infinities become the string "inf"."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    return value


def certificate(family, tag, ratio, **extra):
    """One ratio of a portfolio against its reference, tagged exact, sampled or measured."""
    return {"family": family, "tag": tag, "ratio": ratio, **extra}


def select_family(certificates, family="all"):
    wanted = FAMILIES[family]
    if wanted is None:
        return list(certificates)
    return [c for c in certificates if c["family"] in wanted]


class RunReport:
    """Everything one command run produced, serialised as a JSON document."""

    def __init__(self, command, instance, parameters, portfolio=None, certificates=None,
                 timings=None, notes=None):
        self.command = command
        self.instance = instance
        self.parameters = parameters
        self.portfolio = portfolio
        self.certificates = list(certificates or [])
        self.timings = dict(timings or {})
        self.notes = list(notes or [])

    def violations(self, tol=VIOLATION_TOL):
        """Exact certificates that exceed the portfolio's numeric claim by more than tol, relatively."""
        if self.portfolio is None or self.portfolio.numeric_alpha is None:
            return []
        alpha = self.portfolio.numeric_alpha
        return [
            c for c in self.certificates
            if c["tag"] == EXACT and c["ratio"] > alpha * (1.0 + tol)
        ]

    def to_json(self, timings=True):
        data = {
            "instance": self.instance,
            "command": self.command,
            "parameters": self.parameters,
            "portfolio": self.portfolio.to_json() if self.portfolio is not None else None,
            "certificates": self.certificates,
            "notes": self.notes,
        }
        if timings:
            data["timings"] = self.timings
        return jsonable(data)

    def dumps(self, timings=True):
        return json.dumps(self.to_json(timings), indent=2, ensure_ascii=False) + "\n"
