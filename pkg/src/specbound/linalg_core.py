"""Dense spectral primitives: singular values, eigenvalues, gauges, Schur parts."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
import math

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (EmptySpectrum, NonFiniteError, NonSquareError,
                     OrderingLengthMismatch)

MODULUS = "modulus"
EXPLICIT = "explicit"
SEARCH = "search"
SEARCH_MAX_N = 8


@dataclass(frozen=True)
class OperatorMatrix:
    """A dense complex matrix with a free-text label."""
    data: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("matrix has NaN or infinite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def as_array(A, square=False):
    """Coerce to a finite complex128 2-D array."""
    if isinstance(A, OperatorMatrix):
        arr = A.data
    else:
        arr = np.asarray(A, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got {arr.ndim}-D")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix has NaN or infinite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"square matrix required, got {arr.shape}")
    return arr


def default_tol(A):
    return 1e-10 * (1.0 + operator_norm(A))


# ---------------------------------------------------------------------------
# singular values, eigenvalues, norms
# ---------------------------------------------------------------------------

def singular_values(A):
    """Singular values, nonincreasing, ``min(rows, cols)`` of them."""
    return scipy.linalg.svdvals(as_array(A))


def operator_norm(A):
    s = singular_values(A)
    return float(s[0]) if s.size else 0.0


def schatten_norm(A, p):
    """``(sum s_k^p)^(1/p)``; for ``p < 1`` only a quasi-norm."""
    if not p > 0:
        raise ValueError("Schatten exponent must be positive")
    s = singular_values(A)
    if s[0] == 0.0:
        return 0.0
    # scaled to avoid overflow for large p
    return float(s[0] * np.sum((s / s[0]) ** p) ** (1.0 / p))


def sort_by_modulus(values):
    """Descending modulus, ties by descending real then imaginary part."""
    v = np.asarray(values, dtype=np.complex128).ravel()
    order = np.lexsort((-v.imag, -v.real, -np.abs(v)))
    return v[order]


def eigenvalues(A):
    """All eigenvalues with algebraic multiplicity, modulus-descending."""
    return sort_by_modulus(scipy.linalg.eigvals(as_array(A, square=True)))


def numerical_zero(s, shape):
    """Threshold below which a singular value counts as exactly zero."""
    return max(shape) * np.finfo(float).eps * (float(s[0]) if len(s) else 0.0)


def gauge_from_singular_values(s, w, zero_tol=None):
    """``max_k s_k / w_k`` with ``0/0 := 0`` and ``inf`` for ``s_k > 0 = w_k``."""
    s = np.asarray(s, dtype=float)
    n = s.shape[-1]
    if n == 0:
        return 0.0
    lw = w.log_values(n)
    if zero_tol is None:
        zero_tol = n * np.finfo(float).eps * np.max(s, axis=-1, keepdims=True)
    live = s > zero_tol
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(np.where(live, s, 1.0))
        ratio = np.where(live, logs - lw, -np.inf)
    out = np.exp(np.max(ratio, axis=-1))
    return float(out) if np.ndim(out) == 0 else out


def w_gauge(A, w, zero_tol=None):
    """The ``w``-gauge: least ``M`` with ``s_k(A) <= M w_k`` for every ``k``.

    ``zero_tol`` (default ``max(shape) * eps * s_1``) decides which
    singular values are treated as exact zeros; an infinite result means a
    nonzero singular value meets a zero weight.
    """
    arr = as_array(A)
    s = singular_values(arr)
    if zero_tol is None:
        zero_tol = numerical_zero(s, arr.shape)
    return gauge_from_singular_values(s, w, zero_tol)


# ---------------------------------------------------------------------------
# point-set distances
# ---------------------------------------------------------------------------

def _points(x):
    p = np.asarray(x, dtype=np.complex128).ravel()
    if p.size == 0:
        raise EmptySpectrum("point set is empty")
    return p


def distance_to_set(z, points):
    """``d(z, points)`` for scalar or array ``z``."""
    pts = _points(points)
    z = np.asarray(z, dtype=np.complex128)
    d = np.min(np.abs(z[..., None] - pts), axis=-1)
    return float(d) if d.ndim == 0 else d


def spectral_variation(sigma1, sigma2):
    """Directed distance ``sup_{x in sigma1} d(x, sigma2)``."""
    a = _points(sigma1)
    b = _points(sigma2)
    return float(np.max(np.min(np.abs(a[:, None] - b[None, :]), axis=1)))


def hausdorff(sigma1, sigma2):
    return max(spectral_variation(sigma1, sigma2), spectral_variation(sigma2, sigma1))


def multiset_match(a, b, tol):
    """Greedy matching of two equal-size multisets within ``tol``."""
    a = list(np.asarray(a, dtype=np.complex128).ravel())
    b = list(np.asarray(b, dtype=np.complex128).ravel())
    if len(a) != len(b):
        return False
    for x in sorted(a, key=lambda v: (-abs(v), -v.real, -v.imag)):
        dist = [abs(x - y) for y in b]
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        b.pop(j)
    return True


# ---------------------------------------------------------------------------
# Schur decomposition into normal + nilpotent parts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchurParts:
    """``A = D + N`` from a unitary triangularization ``A = U T U^H``.

    ``D = U diag(T) U^H`` is normal, ``N = U triu(T, 1) U^H`` is nilpotent.
    ``ordering`` lists the diagonal of ``T`` top to bottom.
    """
    basis: np.ndarray
    triangular: np.ndarray
    normal_part: np.ndarray
    nilpotent_part: np.ndarray
    ordering: np.ndarray

    def nilpotent_singular_values(self):
        # unitary invariance: s(N) == s(triu(T, 1))
        return scipy.linalg.svdvals(np.triu(self.triangular, 1))


def complex_schur(A):
    """``(T, U)`` with ``A = U T U^H``; triangular input is taken as-is."""
    arr = as_array(A, square=True)
    n = arr.shape[0]
    if np.all(np.tril(arr, -1) == 0):
        return arr.copy(), np.eye(n, dtype=np.complex128)
    T, U = scipy.linalg.schur(arr, output="complex")
    return np.ascontiguousarray(T), np.ascontiguousarray(U)


def reorder_schur(T, U, target):
    """Bubble the diagonal of ``T`` into the order ``target`` by adjacent swaps.

    ``target`` is matched to the current diagonal entry by entry (closest
    remaining value), so it only needs to agree up to rounding.
    """
    T = np.array(T, dtype=np.complex128, copy=True)
    U = np.array(U, dtype=np.complex128, copy=True)
    n = T.shape[0]
    target = np.asarray(target, dtype=np.complex128).ravel()
    if target.size != n:
        raise OrderingLengthMismatch(f"ordering has {target.size} entries, matrix is {n}x{n}")
    for i in range(n):
        d = np.abs(np.diag(T)[i:] - target[i])
        j = i + int(np.argmin(d))
        for k in range(j - 1, i - 1, -1):
            kernels.givens_swap(T, U, k)
    return T, U


def _parts(T, U):
    diag = np.diag(np.diag(T))
    upper = np.triu(T, 1)
    Uh = U.conj().T
    return SchurParts(
        basis=U,
        triangular=T,
        normal_part=U @ diag @ Uh,
        nilpotent_part=U @ upper @ Uh,
        ordering=np.diag(T).copy(),
    )


def _log_gauges(blocks, lw, zero_tol, exact):
    if exact:
        s = np.linalg.svd(blocks, compute_uv=False)
    else:
        gram = np.conj(np.swapaxes(blocks, 1, 2)) @ blocks
        s = np.sqrt(np.clip(np.linalg.eigvalsh(gram)[:, ::-1], 0.0, None))
    live = s > zero_tol
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(live, np.log(np.where(live, s, 1.0)) - lw, -np.inf)
    return np.max(ratio, axis=1)


def search_orderings(T, w):
    """Diagonal order of ``T`` minimizing the ``w``-gauge of its strict upper part.

    Visits all ``n!`` orderings by adjacent swaps. Returns
    ``(best_diag, best_gauge)``.  Orderings are screened with Gram-matrix
    eigenvalues and the near-best ones re-ranked with an exact SVD.
    """
    n = T.shape[0]
    if n == 1:
        return np.diag(T).copy(), 0.0
    swaps = kernels.plain_changes(n)
    uppers, diags = kernels.sweep_orderings(np.ascontiguousarray(T), swaps)
    # the strict upper part has a zero first column and last row, so its
    # nonzero singular values are those of the (n-1)x(n-1) corner block
    blocks = uppers[:, :-1, 1:]
    lw = w.log_values(n - 1)
    norm = float(np.linalg.norm(T))
    zero_tol = n * np.finfo(float).eps * norm
    chunk = 8192
    approx = np.concatenate([_log_gauges(blocks[i:i + chunk], lw, zero_tol, exact=False)
                             for i in range(0, blocks.shape[0], chunk)])
    # squared singular values from the Gram matrix carry absolute error of
    # order n eps ||T||^2, which can move a small singular value by about
    # sqrt(n eps) ||T||; keep everything that could still be the minimum
    slack = math.sqrt(n * np.finfo(float).eps) * (norm + 1e-300)
    lo = np.log(np.maximum(np.exp(approx) - slack * np.exp(-lw.min()), 0.0) + 1e-300)
    finite = np.isfinite(approx)
    if not finite.any():
        cand = np.arange(approx.size)
    else:
        hi = np.log(np.exp(approx) + slack * np.exp(-lw.min()))
        cand = np.flatnonzero(lo <= np.min(np.where(finite, hi, np.inf)))
    exact = np.concatenate([_log_gauges(blocks[cand[i:i + chunk]], lw, zero_tol, exact=True)
                            for i in range(0, cand.size, chunk)])
    k = int(np.argmin(exact))
    return diags[cand[k]].copy(), float(np.exp(exact[k]))


def schur_decompose(A, ordering=MODULUS, weight=None, permutation=None):
    """Schur parts ``A = D + N`` with the eigenvalues in a chosen order.

    Parameters
    ----------
    ordering : {"modulus", "explicit", "search"}
        ``"modulus"`` puts eigenvalues in modulus-descending order;
        ``"explicit"`` uses ``permutation`` (indices into the
        modulus-descending list); ``"search"`` tries every order for
        ``n <= 8`` and keeps the one minimizing the ``weight``-gauge of ``N``
        (falls back to ``"modulus"`` above that size).
    """
    T, U = complex_schur(A)
    n = T.shape[0]
    base = sort_by_modulus(np.diag(T))
    if ordering == MODULUS:
        target = base
    elif ordering == EXPLICIT:
        if permutation is None:
            raise ValueError("explicit ordering needs a permutation")
        perm = np.asarray(permutation, dtype=int).ravel()
        if perm.size != n:
            raise OrderingLengthMismatch(f"permutation has {perm.size} entries, matrix is {n}x{n}")
        if sorted(perm.tolist()) != list(range(n)):
            raise ValueError(f"not a permutation of range({n}): {perm.tolist()}")
        target = base[perm]
    elif ordering == SEARCH:
        if weight is None:
            raise ValueError("search ordering needs a weight")
        if n > SEARCH_MAX_N:
            target = base
        else:
            target, _ = search_orderings(T, weight)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    T, U = reorder_schur(T, U, target)
    return _parts(T, U)


def check_schur_parts(A, parts, tol=None):
    """Residuals of the SchurParts invariants, as a dict of floats/bools."""
    arr = as_array(A, square=True)
    if tol is None:
        tol = default_tol(arr)
    D, N = parts.normal_part, parts.nilpotent_part
    n = arr.shape[0]
    nn = np.linalg.matrix_power(N, n)
    nrmN = np.linalg.norm(N, 2)
    recon = float(np.linalg.norm(D + N - arr, 2))
    normality = float(np.linalg.norm(D.conj().T @ D - D @ D.conj().T, 2))
    nilp = float(np.linalg.norm(nn, 2))
    spectrum_ok = multiset_match(np.linalg.eigvals(D), eigenvalues(arr),
                                 1e-8 * (1 + np.linalg.norm(arr, 2)))
    return {
        "reconstruction": recon,
        "normality": normality,
        "nilpotency": nilp,
        "nilpotent_norm": float(nrmN),
        "spectrum_match": spectrum_ok,
        "ok": recon <= tol and normality <= tol and spectrum_ok,
    }
