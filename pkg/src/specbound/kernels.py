"""Hot inner loops, each with a jitted and a pure-numpy implementation.

The public names (``givens_swap``, ``sweep_orderings``, ``log_weighted_series``)
dispatch on :data:`specbound._jit.USE_NUMBA`. The ``*_numpy`` and ``*_jit``
variants are exported so tests and benchmarks can compare them directly.
"""
from functools import lru_cache
import math

import numpy as np

from ._jit import USE_NUMBA, njit

LOG_HALF = math.log(0.5)


# --------------------------------------------------------------------------
# Adjacent swap of diagonal entries in a complex Schur form
# --------------------------------------------------------------------------

def _rotation(f, g):
    # complex Givens (c real, s complex) with [c s; -conj(s) c] @ [f, g] = [r, 0]
    af = abs(f)
    ag = abs(g)
    if ag == 0.0:
        return 1.0, 0.0j
    if af == 0.0:
        return 0.0, np.conj(g) / ag
    norm = math.hypot(af, ag)
    return af / norm, (f / af) * np.conj(g) / norm


def givens_swap_numpy(T, Q, k):
    """Swap ``T[k, k]`` and ``T[k+1, k+1]`` of upper-triangular ``T`` in place.

    ``Q`` (may have zero rows) accumulates the unitary so that
    ``Q @ T @ Q^H`` is invariant.
    """
    n = T.shape[0]
    t11 = T[k, k]
    t22 = T[k + 1, k + 1]
    c, s = _rotation(T[k, k + 1], t22 - t11)
    if k + 2 < n:
        x = T[k, k + 2:].copy()
        y = T[k + 1, k + 2:].copy()
        T[k, k + 2:] = c * x + s * y
        T[k + 1, k + 2:] = c * y - np.conj(s) * x
    if k > 0:
        x = T[:k, k].copy()
        y = T[:k, k + 1].copy()
        T[:k, k] = c * x + np.conj(s) * y
        T[:k, k + 1] = c * y - s * x
    T[k, k] = t22
    T[k + 1, k + 1] = t11
    if Q.shape[0] > 0:
        x = Q[:, k].copy()
        y = Q[:, k + 1].copy()
        Q[:, k] = c * x + np.conj(s) * y
        Q[:, k + 1] = c * y - s * x


@njit(cache=True)
def givens_swap_jit(T, Q, k):
    n = T.shape[0]
    t11 = T[k, k]
    t22 = T[k + 1, k + 1]
    f = T[k, k + 1]
    g = t22 - t11
    af = abs(f)
    ag = abs(g)
    if ag == 0.0:
        c = 1.0
        s = 0.0j
    elif af == 0.0:
        c = 0.0
        s = np.conj(g) / ag
    else:
        nrm = math.hypot(af, ag)
        c = af / nrm
        s = (f / af) * np.conj(g) / nrm
    sc = np.conj(s)
    for j in range(k + 2, n):
        x = T[k, j]
        y = T[k + 1, j]
        T[k, j] = c * x + s * y
        T[k + 1, j] = c * y - sc * x
    for i in range(k):
        x = T[i, k]
        y = T[i, k + 1]
        T[i, k] = c * x + sc * y
        T[i, k + 1] = c * y - s * x
    T[k, k] = t22
    T[k + 1, k + 1] = t11
    for i in range(Q.shape[0]):
        x = Q[i, k]
        y = Q[i, k + 1]
        Q[i, k] = c * x + sc * y
        Q[i, k + 1] = c * y - s * x


# --------------------------------------------------------------------------
# Exhaustive ordering sweep by adjacent transpositions
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def plain_changes(n):
    """Swap positions visiting all ``n!`` orderings, one adjacent swap apart.

    Steinhaus-Johnson-Trotter order: ``len(result) == n! - 1``.
    """
    if n <= 1:
        return np.zeros(0, dtype=np.int64)
    sub = plain_changes(n - 1)
    out = []
    pos = n - 1  # position of the largest element
    for block in range(len(sub) + 1):
        if pos == n - 1:
            out.extend(range(n - 2, -1, -1))
            pos = 0
        else:
            out.extend(range(0, n - 1))
            pos = n - 1
        if block < len(sub):
            out.append(int(sub[block]) + (1 if pos == 0 else 0))
    res = np.asarray(out, dtype=np.int64)
    res.setflags(write=False)
    return res


def sweep_orderings_numpy(T0, swaps):
    """Strict upper parts and diagonals of ``T0`` after each prefix of ``swaps``.

    Row 0 is ``T0`` itself, row ``i`` is the form after ``swaps[:i]``.
    """
    T = np.array(T0, dtype=np.complex128, copy=True)
    n = T.shape[0]
    P = len(swaps) + 1
    uppers = np.empty((P, n, n), dtype=np.complex128)
    diags = np.empty((P, n), dtype=np.complex128)
    iu = np.triu_indices(n, 1)
    noq = np.zeros((0, n), dtype=np.complex128)
    mask = np.zeros((n, n), dtype=bool)
    mask[iu] = True
    for i in range(P):
        if i > 0:
            givens_swap_numpy(T, noq, int(swaps[i - 1]))
        uppers[i] = np.where(mask, T, 0.0)
        diags[i] = np.diag(T)
    return uppers, diags


@njit(cache=True)
def sweep_orderings_jit(T0, swaps):
    T = T0.copy()
    n = T.shape[0]
    P = swaps.shape[0] + 1
    uppers = np.zeros((P, n, n), dtype=np.complex128)
    diags = np.empty((P, n), dtype=np.complex128)
    noq = np.zeros((0, n), dtype=np.complex128)
    for p in range(P):
        if p > 0:
            givens_swap_jit(T, noq, swaps[p - 1])
        for i in range(n):
            diags[p, i] = T[i, i]
            for j in range(i + 1, n):
                uppers[p, i, j] = T[i, j]
    return uppers, diags


# --------------------------------------------------------------------------
# log(1 + sum_k prod_{j<=k} (w_j e^y)^2) with certified geometric tail
# --------------------------------------------------------------------------

def log_weighted_series_numpy(log_w, y, rel_tol):
    """Log of ``1 + sum_{k>=1} exp(2*(log_w[0]+...+log_w[k-1]) + 2*k*y)``.

    Stops at the first ``k`` whose next-term ratio ``q = exp(2*(log_w[k]+y))``
    is at most 1/2 and whose tail bound ``2*q*t_k`` is below
    ``rel_tol`` times the partial sum. Returns ``(log_sum, k)``, with
    ``k = -1`` when ``log_w`` runs out first.
    """
    M = log_w.shape[0]
    # log ratio going from term k to k+1 is 2*(log_w[k] + y); nonincreasing in k
    thresh = 0.5 * LOG_HALF - y
    # first index k (0-based into log_w) with log_w[k] <= thresh
    k0 = int(np.searchsorted(-log_w, -thresh, side="left"))
    if k0 >= M:
        return math.nan, -1
    # term k0 is the last one whose successor ratio is unknown to be <= 1/2
    hi = min(M - 1, k0 + 256)
    while True:
        ks = np.arange(1, hi + 1)
        logt = 2.0 * np.cumsum(log_w[:hi]) + 2.0 * ks * y
        logt = np.concatenate(([0.0], logt))
        run = np.logaddexp.accumulate(logt)
        # candidates k >= max(k0, 1): ratio from k to k+1 uses log_w[k]
        cand = np.arange(max(k0, 1), hi)
        logq = 2.0 * (log_w[cand] + y)
        with np.errstate(invalid="ignore"):
            ok = (logq <= LOG_HALF) & (
                math.log(2.0) + logq + logt[cand] <= math.log(rel_tol) + run[cand]
            ) | np.isneginf(logt[cand])
        if ok.any():
            k = int(cand[np.argmax(ok)])
            return float(run[k]), k
        if hi >= M - 1:
            return math.nan, -1
        hi = min(M - 1, 2 * hi)


@njit(cache=True)
def log_weighted_series_jit(log_w, y, rel_tol):
    M = log_w.shape[0]
    log_tol = math.log(rel_tol)
    log_half = math.log(0.5)
    log2 = math.log(2.0)
    run = 0.0  # log partial sum, term k=0 is 1
    logt = 0.0
    acc = 0.0
    for k in range(1, M):
        acc += log_w[k - 1]
        logt = 2.0 * acc + 2.0 * k * y
        if logt == -math.inf:
            return run, k
        if logt > run:
            run = logt + math.log1p(math.exp(run - logt))
        else:
            run = run + math.log1p(math.exp(logt - run))
        logq = 2.0 * (log_w[k] + y)
        if logq <= log_half and log2 + logq + logt <= log_tol + run:
            return run, k
    return math.nan, -1


if USE_NUMBA:
    givens_swap = givens_swap_jit
    sweep_orderings = sweep_orderings_jit
    log_weighted_series = log_weighted_series_jit
else:
    givens_swap = givens_swap_numpy
    sweep_orderings = sweep_orderings_numpy
    log_weighted_series = log_weighted_series_numpy
