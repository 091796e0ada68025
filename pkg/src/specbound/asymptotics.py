"""Comparison series and growth predictors for the two standard weight families.

Every series here has the form ``sum_k exp(c_k) x^k`` with log-concave
coefficients, so the term ratio is nonincreasing in ``k``.  Summation runs in
the log domain, chunk by chunk, and stops once the ratio bound drops to 1/2
and the geometric tail ``2 q t_k`` is negligible relative to the partial sum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import gammaln

from .bounds import DEFAULT_C, BoundFunction
from .errors import TailNotConverged
from .weights import WeightSpec, fit_exponential_constants

SERIES_RTOL = 1e-14
SERIES_MAX_TERMS = 100_000_000
_LOG_HALF = math.log(0.5)


def _certified_log_series(log_coef, log_ratio_bound, log_x, rel_tol=SERIES_RTOL,
                          max_terms=SERIES_MAX_TERMS):
    """``log sum_k exp(log_coef(k) + k log_x)`` with a certified stopping rule.

    ``log_ratio_bound(k)`` must bound ``log(t_{k+1}/t_k)`` from above and be
    nonincreasing in ``k``.
    """
    if log_x == -math.inf:
        return float(log_coef(np.zeros(1))[0])
    log_tol = math.log(rel_tol)
    total = -math.inf
    start, chunk = 0, 1024
    while start < max_terms:
        k = np.arange(start, min(start + chunk, max_terms), dtype=float)
        lt = log_coef(k) + k * log_x
        partial = np.logaddexp.accumulate(np.concatenate(([total], lt)))[1:]
        q = log_ratio_bound(k) + log_x
        done = (q <= _LOG_HALF) & (math.log(2.0) + q + lt <= log_tol + partial)
        hit = np.flatnonzero(done)
        if hit.size:
            return float(partial[hit[0]])
        total = float(partial[-1])
        start += k.size
        chunk = min(chunk * 2, 1 << 22)
    raise TailNotConverged(f"series did not settle within {max_terms} terms")


def _log_x(r):
    r = float(r)
    if r < 0 or math.isnan(r):
        raise ValueError("argument must be >= 0")
    return -math.inf if r == 0 else math.log(r)


# ---------------------------------------------------------------------------
# Schatten-Lorentz comparison series
# ---------------------------------------------------------------------------

def log_phi_L_upper(p, r, rel_tol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS, log_r=None):
    """``log sum_k r^k / (k!)^(1/p)``."""
    if not p > 0:
        raise ValueError("p must be positive")
    lx = _log_x(r) if log_r is None else float(log_r)
    return _certified_log_series(
        lambda k: -gammaln(k + 1) / p,
        lambda k: -np.log1p(k) / p,
        lx, rel_tol, max_terms)


def log_phi_L_lower(p, b, r, rel_tol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS, log_r=None):
    """``log sum_k exp(-b sqrt(k)) r^k / (k!)^(1/p)``."""
    if not (p > 0 and b > 0):
        raise ValueError("p and b must be positive")
    lx = _log_x(r) if log_r is None else float(log_r)
    return _certified_log_series(
        lambda k: -gammaln(k + 1) / p - b * np.sqrt(k),
        lambda k: -np.log1p(k) / p,
        lx, rel_tol, max_terms)


def phi_L_upper(p, r, **kw):
    return math.exp(log_phi_L_upper(p, r, **kw))


def phi_L_lower(p, b, r, **kw):
    return math.exp(log_phi_L_lower(p, b, r, **kw))


# ---------------------------------------------------------------------------
# exponential-class comparison series
# ---------------------------------------------------------------------------

def _e_ratio(a, alpha):
    return lambda k: -a * ((k + 1) ** (alpha + 1) - k ** (alpha + 1))


def log_phi_E_upper(a, alpha, r, rel_tol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS, log_r=None):
    """``log sum_k exp(-a k^(alpha+1)) r^k``."""
    if not (a > 0 and alpha > 0):
        raise ValueError("a and alpha must be positive")
    lx = _log_x(r) if log_r is None else float(log_r)
    return _certified_log_series(lambda k: -a * k ** (alpha + 1), _e_ratio(a, alpha),
                                 lx, rel_tol, max_terms)


def log_phi_E_lower(a, alpha, b, r, rel_tol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS,
                    log_r=None):
    """``log sum_k exp(-a k^(alpha+1) - b k^(alpha+1/2)) r^k``."""
    if not (a > 0 and alpha > 0 and b > 0):
        raise ValueError("a, alpha and b must be positive")
    lx = _log_x(r) if log_r is None else float(log_r)
    return _certified_log_series(
        lambda k: -a * k ** (alpha + 1) - b * k ** (alpha + 0.5),
        _e_ratio(a, alpha), lx, rel_tol, max_terms)


def phi_E_upper(a, alpha, r, **kw):
    return math.exp(log_phi_E_upper(a, alpha, r, **kw))


def phi_E_lower(a, alpha, b, r, **kw):
    return math.exp(log_phi_E_lower(a, alpha, b, r, **kw))


def phi_L_asymptote(p, r):
    """Leading behaviour ``r^p / p`` of ``log phi_L``."""
    return r**p / p


def phi_E_asymptote(a, alpha, r=None, log_r=None):
    """Leading behaviour of ``log phi_E``."""
    lr = math.log(r) if log_r is None else float(log_r)
    return a ** (-1 / alpha) * alpha / (alpha + 1) ** (1 + 1 / alpha) * lr ** (1 + 1 / alpha)


# ---------------------------------------------------------------------------
# factorial brackets
# ---------------------------------------------------------------------------

def log_stirling_bounds(k):
    """``(lo, hi)`` with ``lo <= log k! <= hi`` for integers ``k >= 1``.

    ``sqrt(2 pi k) (k/e)^k <= k! <= sqrt(e^2 k) (k/e)^k``.
    """
    k = np.asarray(k, dtype=float)
    core = k * (np.log(k) - 1.0)
    return 0.5 * np.log(2 * np.pi * k) + core, 0.5 * (2.0 + np.log(k)) + core


def log_factorial(k):
    return gammaln(np.asarray(k, dtype=float) + 1.0)


# ---------------------------------------------------------------------------
# models and predictors
# ---------------------------------------------------------------------------

SCHATTEN_LORENTZ = "schatten_lorentz"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class AsymptoticModel:
    family: str
    params: tuple
    dostanic_C: float = DEFAULT_C
    _bf: BoundFunction | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in (SCHATTEN_LORENTZ, EXPONENTIAL):
            raise ValueError(f"unknown family {self.family!r}")
        if any(not x > 0 for x in self.params) or not self.dostanic_C > 0:
            raise ValueError("model parameters must be strictly positive")

    @classmethod
    def schatten_lorentz(cls, p, dostanic_C=DEFAULT_C):
        return cls(SCHATTEN_LORENTZ, (float(p),), float(dostanic_C))

    @classmethod
    def exponential(cls, a, alpha, dostanic_C=DEFAULT_C):
        return cls(EXPONENTIAL, (float(a), float(alpha)), float(dostanic_C))

    @property
    def weight(self) -> WeightSpec:
        if self.family == SCHATTEN_LORENTZ:
            return WeightSpec.schatten_lorentz(*self.params)
        return WeightSpec.exponential(*self.params)

    @property
    def bound_function(self) -> BoundFunction:
        if self._bf is None:
            object.__setattr__(self, "_bf", BoundFunction.for_weight(self.weight, self.dostanic_C))
        return self._bf

    def to_dict(self):
        names = ("p",) if self.family == SCHATTEN_LORENTZ else ("a", "alpha")
        d = {"family": self.family}
        d.update(zip(names, self.params))
        d["dostanic_C"] = self.dostanic_C
        return d


def predict_logF(model, r=None, log_r=None):
    """Leading-order growth of ``log F`` as ``r -> inf``."""
    C = model.dostanic_C
    if model.family == SCHATTEN_LORENTZ:
        (p,) = model.params
        lr = math.log(r) if log_r is None else float(log_r)
        return 4 * math.e * C**p / p * math.exp(p * lr)
    a, alpha = model.params
    lr = math.log(r) if log_r is None else float(log_r)
    return 4 * ((alpha + 1) / a) ** (1 / alpha) * alpha / (alpha + 1) * lr ** (1 + 1 / alpha)


def predict_H_smallr(model, r=None, log_r=None):
    """Leading-order behaviour of ``H`` as ``r -> 0``.

    Pass ``log_r`` for arguments below the float range.
    """
    lr = math.log(r) if log_r is None else float(log_r)
    if not lr < 0:
        raise ValueError("prediction needs 0 < r < 1")
    L = -lr
    C = model.dostanic_C
    if model.family == SCHATTEN_LORENTZ:
        (p,) = model.params
        return C * (4 * math.e / p) ** (1 / p) * L ** (-1 / p)
    a, alpha = model.params
    e = alpha / (alpha + 1)
    coef = 4 ** (-e) * (a / (alpha + 1)) ** (1 / (alpha + 1)) * (1 / e) ** e
    return math.exp(-coef * L**e)


POWER_LAW, EXP_POWER, LOG_POWER = "power_law", "exp_power", "log_power"


def asym_inverse(kind, a, b, r):
    """Asymptotic inverse for the three growth types.

    ``power_law``: ``f(r) ~ a r^b``; ``exp_power``: ``log f(r) ~ a r^b``;
    ``log_power``: ``log f(r) ~ a (log r)^b``.  For ``log_power`` the value
    returned is ``f^{-1}(r)`` itself, which can overflow; use
    :func:`asym_log_inverse` for the logarithm.
    """
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if kind == POWER_LAW:
        return (r / a) ** (1 / b)
    if kind == EXP_POWER:
        return (math.log(r) / a) ** (1 / b)
    if kind == LOG_POWER:
        return math.exp(asym_log_inverse(a, b, r))
    raise ValueError(f"unknown kind {kind!r}")


def asym_log_inverse(a, b, r=None, log_r=None):
    """``log f^{-1}(r)`` when ``log f(r) ~ a (log r)^b``."""
    lr = math.log(r) if log_r is None else float(log_r)
    return (lr / a) ** (1 / b)


# ---------------------------------------------------------------------------
# sandwiches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sandwich:
    """``log`` of the lower comparison, of ``F`` itself and of the upper comparison."""
    r: float
    log_lower: float
    log_F: float
    log_upper: float

    @property
    def holds(self):
        slack = 1e-12 * max(1.0, abs(self.log_F))
        return self.log_lower <= self.log_F + slack and self.log_F <= self.log_upper + slack


def sl_sandwich(p, r, dostanic_C=DEFAULT_C, bf=None):
    """Comparison of ``F`` against the Schatten-Lorentz series pair at ``r``."""
    if bf is None:
        bf = BoundFunction.for_weight(WeightSpec.schatten_lorentz(p), dostanic_C)
    C = bf.dostanic_C
    lx = (2 / p) * math.log(2 * math.e) + 2 * math.log(C * r)
    pre = math.log1p(r)
    lo = pre + log_phi_L_lower(p / 2, 12 / p, None, log_r=lx)
    hi = pre + log_phi_L_upper(p / 2, None, log_r=lx)
    return Sandwich(float(r), lo, bf.log_F(r), hi)


def exp_sandwich(a, alpha, r, dostanic_C=DEFAULT_C, bf=None, constants=None,
                 literal_prefactor=False):
    """Comparison of ``F`` against the exponential series pair at ``r >= 1``.

    The lower series uses the fitted product constant (see
    :func:`specbound.weights.fit_exponential_constants`).  Its prefactor is
    ``1 + r exp(-a)``, the actual first factor of ``F``; with
    ``literal_prefactor`` it is ``1 + r``, which overshoots ``F`` near
    ``r = 1``.
    """
    if bf is None:
        bf = BoundFunction.for_weight(WeightSpec.exponential(a, alpha), dostanic_C)
    if constants is None:
        constants = fit_exponential_constants(a, alpha)
    C = bf.dostanic_C
    a_prime = 2 ** (1 - alpha) * a / (alpha + 1) ** 2
    lx = 2 * math.log(C * r)
    pre = math.log1p(r)
    pre_lo = pre if literal_prefactor else math.log1p(r * math.exp(-a))
    lo = pre_lo + log_phi_E_lower(a_prime, alpha, 2 * constants.c_prod, None, log_r=lx)
    hi = pre + log_phi_E_upper(a_prime, alpha, None, log_r=lx)
    return Sandwich(float(r), lo, bf.log_F(r), hi)
