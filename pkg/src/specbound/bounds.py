"""Resolvent bounds built from the generating function of a weight.

For a weight ``v`` and a constant ``C`` (the quasi-nilpotent power-bound
constant, default 2.0)::

    F(r)  = (1 + r v_1) * (1 + sum_{k>=1} (v_1 ... v_k)^2 (C r)^(2k))
    Ft(r) = r F(r)
    H(r)  = 1 / Ft^{-1}(1 / r)

The resolvent bound for a matrix ``A`` in the class of ``w`` uses
``v = wbar-dot`` (``w.bar().dot()``)::

    ||(zI - A)^{-1}|| <= F(nu / d) / d,    d = dist(z, spectrum(A))

where ``nu`` is any upper bound on the departure from normality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from . import linalg_core as lc
from .errors import GaugeInfinite, OnSpectrum, TailNotConverged, ZeroPoint

DEFAULT_C = 2.0
NORMAL_RTOL = 1e-14

SCHUR_SEARCH = "schur_search"
TWO_GAUGE = "two_gauge"


@dataclass(frozen=True)
class BoundFunction:
    """``F``, ``Ft``, ``Ft^{-1}`` and ``H`` for a fixed weight and constant.

    ``weight`` is used as given; build from a user weight with
    :meth:`for_weight`, which applies ``.bar().dot()``.
    """
    weight: object
    dostanic_C: float = DEFAULT_C
    rel_tol: float = 1e-14
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.dostanic_C > 0:
            raise ValueError("constant C must be positive")

    @classmethod
    def for_weight(cls, w, dostanic_C=DEFAULT_C, **kw):
        return cls(w.bar().dot(), dostanic_C, **kw)

    def _log_w(self, size):
        return np.ascontiguousarray(self.weight.log_values(size))

    @property
    def w1(self):
        return math.exp(self._log_w(1)[0])

    def log_F(self, r):
        r = float(r)
        if r < 0 or math.isnan(r):
            raise ValueError(f"F is defined on [0, inf), got {r}")
        if r == 0.0:
            return 0.0
        if math.isinf(r):
            return math.inf
        y = math.log(self.dostanic_C * r)
        # grow the weight table until the series certifies or hits the cap
        cap = self.max_terms + 1
        size = min(cap, 4096)
        while True:
            log_sum, k = kernels.log_weighted_series(self._log_w(size), y, self.rel_tol)
            if k >= 0 or size >= cap:
                break
            size = min(cap, 4 * size)
        if k < 0:
            raise TailNotConverged(
                f"series for F({r:g}) not certified within {self.max_terms} terms "
                f"(weight {self.weight}, C={self.dostanic_C})")
        return math.log1p(r * self.w1) + log_sum

    def F(self, r):
        lf = self.log_F(r)
        return math.exp(lf) if lf < 709.0 else math.inf

    def log_F_tilde(self, r):
        return math.log(r) + self.log_F(r) if r > 0 else -math.inf

    def F_tilde(self, r):
        return r * self.F(r)

    def F_tilde_inverse(self, y):
        """The unique ``r`` with ``r F(r) = y`` (bracketing + log-space bisection)."""
        y = float(y)
        if y < 0 or math.isnan(y):
            raise ValueError("Ft^{-1} needs y >= 0")
        if y == 0.0:
            return 0.0
        if math.isinf(y):
            return math.inf
        return self.F_tilde_inverse_log(math.log(y))

    def F_tilde_inverse_log(self, log_y):
        """``Ft^{-1}(exp(log_y))``; usable far outside the float range of ``y``."""
        ly = float(log_y)

        def g(x):
            return self.log_F_tilde(x) - ly

        if ly <= 0.0:
            hi = math.exp(ly)
            if hi == 0.0:
                return 0.0
            lo = hi * math.exp(-self.log_F(hi))
            if lo == hi:
                return hi
        elif g(1.0) >= 0:
            hi, lo = 1.0, 0.5
            while g(lo) >= 0:
                hi, lo = lo, lo / 2
        else:
            lo, hi = 1.0, 2.0
            while g(hi) < 0:
                lo, hi = hi, 2 * hi
        glo, ghi = g(lo), g(hi)
        for _ in range(200):
            if hi / lo - 1.0 <= 4 * np.finfo(float).eps:
                break
            mid = math.sqrt(lo * hi)
            if mid <= lo or mid >= hi:
                break
            gm = g(mid)
            if gm == 0:
                return mid
            if gm < 0:
                lo, glo = mid, gm
            else:
                hi, ghi = mid, gm
        return lo if abs(glo) <= abs(ghi) else hi

    def H(self, r):
        """``1 / Ft^{-1}(1/r)``, with ``H(0) = 0``."""
        r = float(r)
        if r < 0 or math.isnan(r):
            raise ValueError("H is defined on [0, inf)")
        if r == 0.0:
            return 0.0
        return 1.0 / self.F_tilde_inverse_log(-math.log(r))

    def H_log(self, log_r):
        """``H(exp(log_r))`` for arguments below the float range."""
        return 1.0 / self.F_tilde_inverse_log(-float(log_r))

    def scaled_H(self, scale, r):
        """``scale * H(r / scale)``, the perturbation radius for budget ``scale``."""
        if r == 0:
            return 0.0
        return scale * self.H(r / scale)


def quasinilpotent_resolvent_bound(bf, gauge, z):
    """``|z|^{-1} F(|z|^{-1} gauge)`` for a nilpotent matrix of the given gauge."""
    az = abs(complex(z))
    if az == 0.0:
        raise ZeroPoint("the bound is undefined at z = 0")
    return bf.F(gauge / az) / az


@dataclass(frozen=True)
class NonNormalityBudget:
    """Upper bound ``nu_upper`` on the departure from normality.

    ``source`` is ``"schur_search"`` when a Schur nilpotent part supplied the
    value and ``"two_gauge"`` when the ``2 * gauge`` cap did.
    """
    nu_upper: float
    source: str
    gauge: float
    schur_gauge: float | None = None
    ordering: np.ndarray | None = field(default=None, repr=False, compare=False)
    normal: bool = False


def nilpotent_zero_tol(A):
    # roundoff floor for the strict upper part of a computed Schur form
    arr = lc.as_array(A)
    n = arr.shape[0]
    return 4.0 * n * np.finfo(float).eps * float(np.linalg.norm(arr))


def is_negligible(nu, A, rtol=NORMAL_RTOL):
    return nu <= rtol * (1.0 + lc.operator_norm(A))


def departure_budget(A, w, strategy=SCHUR_SEARCH, ordering=lc.SEARCH,
                     normal_rtol=NORMAL_RTOL):
    """Computable upper bound on the ``w``-departure from normality of ``A``.

    ``strategy="schur_search"`` takes the smaller of the wbar-dot gauge of a
    Schur nilpotent part (ordering per ``ordering``) and ``2 * gauge_w(A)``;
    ``"two_gauge"`` uses the cap alone.
    """
    arr = lc.as_array(A, square=True)
    g = lc.w_gauge(arr, w)
    if math.isinf(g):
        raise GaugeInfinite(
            f"matrix has nonzero singular values where weight {w} vanishes")
    cap = 2.0 * g
    if strategy == TWO_GAUGE:
        nu = cap
        return NonNormalityBudget(nu, TWO_GAUGE, g, None, None,
                                  is_negligible(nu, arr, normal_rtol))
    if strategy != SCHUR_SEARCH:
        raise ValueError(f"unknown strategy {strategy!r}")
    v = w.bar().dot()
    ztol = nilpotent_zero_tol(arr)
    parts = lc.schur_decompose(arr, ordering=lc.MODULUS)
    sg = lc.gauge_from_singular_values(parts.nilpotent_singular_values(), v, ztol)
    if ordering != lc.MODULUS and sg > 0.0:
        # a vanishing nilpotent part cannot be improved on, so only search otherwise
        parts = lc.schur_decompose(arr, ordering=ordering, weight=v)
        sg = lc.gauge_from_singular_values(parts.nilpotent_singular_values(), v, ztol)
    if sg <= cap:
        nu, src = sg, SCHUR_SEARCH
    else:
        nu, src = cap, TWO_GAUGE
    return NonNormalityBudget(nu, src, g, sg, parts.ordering,
                              is_negligible(nu, arr, normal_rtol))


def resolvent_bound(A, w, z, budget=None, dostanic_C=DEFAULT_C, bf=None,
                    tol=None):
    """Upper bound on ``||(zI - A)^{-1}||`` from distance to the spectrum.

    ``z`` may be a scalar or an array; the result has the same shape.
    Raises :class:`OnSpectrum` when some ``z`` is within ``tol`` of an
    eigenvalue.
    """
    arr = lc.as_array(A, square=True)
    if budget is None:
        budget = departure_budget(arr, w)
    if bf is None:
        bf = BoundFunction.for_weight(w, dostanic_C)
    if tol is None:
        tol = lc.default_tol(arr)
    sigma = lc.eigenvalues(arr)
    zz = np.asarray(z, dtype=np.complex128)
    d = np.atleast_1d(lc.distance_to_set(zz, sigma))
    if np.any(d <= tol):
        raise OnSpectrum(f"z within {tol:g} of the spectrum")
    nu = budget.nu_upper
    if budget.normal or nu == 0.0:
        out = 1.0 / d
    else:
        out = np.array([bf.F(nu / di) / di for di in d.ravel()]).reshape(d.shape)
    return float(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)


def true_resolvent_norm(A, z):
    """``||(zI - A)^{-1}||_2`` by dense SVD (oracle)."""
    arr = lc.as_array(A, square=True)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = arr.shape[0]
    shifted = zz.ravel()[:, None, None] * np.eye(n) - arr
    smin = np.linalg.svd(shifted, compute_uv=False)[:, -1]
    with np.errstate(divide="ignore"):
        out = 1.0 / smin
    return float(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))
