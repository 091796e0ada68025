"""Resolvent and spectral-distance bounds for operators with prescribed singular-value decay."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, MathDomainError, ParseError, SpecBoundError,
                     TailNotConverged)
from .weights import WeightSpec, parse_weight
from .linalg_core import OperatorMatrix, schur_decompose, w_gauge
from .bounds import BoundFunction, departure_budget, resolvent_bound
from .perturbation import (spectral_distance_bound, spectral_variation_bound,
                           truncation_certify)
from .pseudospectra import inclusion_disks, pseudospectrum_grid

__all__ = [
    "__version__",
    "BoundFunction",
    "ConvergenceError",
    "MathDomainError",
    "OperatorMatrix",
    "ParseError",
    "SpecBoundError",
    "TailNotConverged",
    "WeightSpec",
    "departure_budget",
    "inclusion_disks",
    "parse_weight",
    "pseudospectrum_grid",
    "resolvent_bound",
    "schur_decompose",
    "spectral_distance_bound",
    "spectral_variation_bound",
    "truncation_certify",
    "w_gauge",
]
