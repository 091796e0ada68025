"""Spectral variation / distance certificates and truncation enclosures."""
from __future__ import annotations

from dataclasses import dataclass
import hashlib
import math

import numpy as np

from . import linalg_core as lc
from .bounds import DEFAULT_C, BoundFunction, departure_budget
from .errors import BadTruncationSize, NonSquareError

VARIATION = "variation"
HAUSDORFF = "hausdorff"
NORMAL_EXACT = "normal_exact"


def bauer_fike_radius(g_inverse, K, delta):
    """``K h(delta / K)`` with ``h(r) = 1 / g_inverse(1 / r)`` and ``h(0) = 0``.

    ``g_inverse`` is the inverse of a strictly increasing surjection of
    ``[0, inf)``; when ``||R(A;z)|| <= g(K/d)/K`` everywhere off the
    spectrum, the result bounds how far the spectrum of any ``B`` with
    ``||A - B|| = delta`` can stray from that of ``A``.
    """
    if not K > 0:
        raise ValueError("K must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return 0.0
    return K / g_inverse(K / delta)


def matrix_digest(*mats):
    h = hashlib.sha256()
    for m in mats:
        arr = np.ascontiguousarray(lc.as_array(m))
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class DistanceCertificate:
    """Upper bound on a spectral distance, optionally with the observed value."""
    bound_kind: str
    value: float
    budget_used: float
    weight: str
    dostanic_C: float
    perturbation_norm: float
    inputs_digest: str
    observed: float | None = None

    @property
    def holds(self):
        return None if self.observed is None else self.observed <= self.value * (1 + 1e-12) + 1e-14

    def to_dict(self):
        d = {
            "bound_kind": self.bound_kind,
            "value": self.value,
            "budget_used": self.budget_used,
            "weight": self.weight,
            "dostanic_C": self.dostanic_C,
            "perturbation_norm": self.perturbation_norm,
            "inputs_digest": self.inputs_digest,
        }
        if self.observed is not None:
            d["observed"] = self.observed
            d["holds"] = self.holds
        return d


def _pair(A, B):
    a = lc.as_array(A, square=True)
    b = lc.as_array(B, square=True)
    if a.shape != b.shape:
        raise NonSquareError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def spectral_variation_bound(A, B, w, dostanic_C=DEFAULT_C, ordering=lc.SEARCH,
                             verify=False, bf=None, budget=None):
    """Bound on ``sup_{mu in sigma(B)} d(mu, sigma(A))`` using the budget of ``A``.

    Exact ``||A - B||`` when ``A`` is (numerically) normal.
    """
    a, b = _pair(A, B)
    if bf is None:
        bf = BoundFunction.for_weight(w, dostanic_C)
    if budget is None:
        budget = departure_budget(a, w, ordering=ordering)
    delta = lc.operator_norm(a - b)
    if budget.normal:
        kind, value, nu = NORMAL_EXACT, delta, 0.0
    else:
        nu = budget.nu_upper
        kind, value = VARIATION, bf.scaled_H(nu, delta)
    observed = None
    if verify:
        observed = lc.spectral_variation(lc.eigenvalues(b), lc.eigenvalues(a))
    return DistanceCertificate(kind, value, nu, str(w), bf.dostanic_C, delta,
                               matrix_digest(a, b), observed)


def spectral_distance_bound(A, B, w, dostanic_C=DEFAULT_C, ordering=lc.SEARCH,
                            verify=False, bf=None, budgets=None):
    """Bound on the Hausdorff distance of the two spectra.

    Uses ``m = max(nu_A, nu_B)``; exact ``||A - B||`` when both are normal.
    """
    a, b = _pair(A, B)
    if bf is None:
        bf = BoundFunction.for_weight(w, dostanic_C)
    if budgets is None:
        budgets = (departure_budget(a, w, ordering=ordering),
                   departure_budget(b, w, ordering=ordering))
    ba, bb = budgets
    delta = lc.operator_norm(a - b)
    if ba.normal and bb.normal:
        kind, value, m = NORMAL_EXACT, delta, 0.0
    else:
        m = max(0.0 if ba.normal else ba.nu_upper, 0.0 if bb.normal else bb.nu_upper)
        kind, value = HAUSDORFF, bf.scaled_H(m, delta)
    observed = None
    if verify:
        observed = lc.hausdorff(lc.eigenvalues(a), lc.eigenvalues(b))
    da, db = matrix_digest(a), matrix_digest(b)
    digest = hashlib.sha256("".join(sorted((da, db))).encode()).hexdigest()
    return DistanceCertificate(kind, value, m, str(w), bf.dostanic_C, delta,
                               digest, observed)


@dataclass(frozen=True)
class TruncationResult:
    """Spectrum of the leading ``k x k`` block and the enclosure radius.

    Every eigenvalue of the full matrix lies within ``radius`` of ``centers``
    (block eigenvalues plus the origin) and vice versa.
    """
    k: int
    block_spectrum: np.ndarray
    centers: np.ndarray
    radius: float
    certificate: DistanceCertificate


def truncate(A, k):
    """``P_k A P_k``: the leading block embedded back at full size."""
    arr = lc.as_array(A, square=True)
    out = np.zeros_like(arr)
    out[:k, :k] = arr[:k, :k]
    return out


def truncation_certify(A, k, w, dostanic_C=DEFAULT_C, ordering=lc.SEARCH,
                       verify=False, bf=None):
    arr = lc.as_array(A, square=True)
    n = arr.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise BadTruncationSize(f"truncation size must be in [1, {n}], got {k}")
    Ak = truncate(arr, k)
    block = lc.eigenvalues(arr[:k, :k])
    centers = block if k == n else lc.sort_by_modulus(np.append(block, 0.0))
    cert = spectral_distance_bound(arr, Ak, w, dostanic_C, ordering=ordering,
                                   verify=False, bf=bf)
    if verify:
        observed = lc.hausdorff(lc.eigenvalues(arr), centers)
        cert = DistanceCertificate(cert.bound_kind, cert.value, cert.budget_used,
                                   cert.weight, cert.dostanic_C, cert.perturbation_norm,
                                   cert.inputs_digest, observed)
    return TruncationResult(k, block, centers, cert.value, cert)
