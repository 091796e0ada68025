"""Weight sequences and their geometric-mean / entry-doubling transforms.

A weight is a nonincreasing, nonnegative sequence ``w_1 >= w_2 >= ...``.
Three families are supported:

* ``sl:p=P``                ``w_k = k**(-1/P)``  (Schatten-Lorentz)
* ``exp:a=A,alpha=B``       ``w_k = exp(-A * k**B)``
* ``explicit:v1,v2,...``    the listed values, then zeros

Two transforms may be chained after the base, applied left to right:
``.bar`` (successive geometric means) and ``.dot`` (each entry doubled).
Everything is computed on log-values, so ``-inf`` encodes an exact zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
import re
import threading

import numpy as np
from scipy.special import gammaln

from .errors import ParseError

K_PROBE = 10_000

SCHATTEN_LORENTZ = "sl"
EXPONENTIAL = "exp"
EXPLICIT = "explicit"
BAR = "bar"
DOT = "dot"


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    params: tuple
    chain: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "sl":
            (p,) = self.params
            if not p > 0 or not math.isfinite(p):
                raise ValueError(f"Schatten-Lorentz exponent must be positive, got {p}")
        elif self.kind == "exp":
            a, alpha = self.params
            if not (a > 0 and alpha > 0 and math.isfinite(a) and math.isfinite(alpha)):
                raise ValueError(f"exponential weight needs a, alpha > 0, got {a}, {alpha}")
        elif self.kind == "explicit":
            vals = np.asarray(self.params, dtype=float)
            if vals.size == 0:
                raise ValueError("explicit weight needs at least one value")
            if not np.all(np.isfinite(vals)) or np.any(vals < 0):
                raise ValueError("explicit weight values must be finite and nonnegative")
            if np.any(np.diff(vals) > 0):
                raise ValueError("explicit weight values must be nonincreasing")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        for tag in self.chain:
            if tag not in (BAR, DOT):
                raise ValueError(f"unknown transform {tag!r}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def schatten_lorentz(cls, p):
        return cls("sl", (float(p),))

    @classmethod
    def exponential(cls, a, alpha):
        return cls("exp", (float(a), float(alpha)))

    @classmethod
    def explicit(cls, values):
        return cls("explicit", tuple(float(v) for v in values))

    # -- transforms -------------------------------------------------------
    def bar(self):
        return WeightSpec(self.kind, self.params, self.chain + (BAR,))

    def dot(self):
        return WeightSpec(self.kind, self.params, self.chain + (DOT,))

    def base(self):
        return WeightSpec(self.kind, self.params)

    @property
    def zero_extended(self):
        """True when the sequence is eventually zero (explicit lists)."""
        return self.kind == "explicit"

    # -- evaluation -------------------------------------------------------
    def log_values(self, n):
        """``log w_1, ..., log w_n`` as a read-only array."""
        return _table(self, int(n))[:n]

    def values(self, n):
        return np.exp(self.log_values(n))

    def __call__(self, k):
        return evaluate(self, k)

    def __str__(self):
        if self.kind == "sl":
            head = f"sl:p={self.params[0]!r}"
        elif self.kind == "exp":
            head = f"exp:a={self.params[0]!r},alpha={self.params[1]!r}"
        else:
            head = "explicit:" + ",".join(repr(v) for v in self.params)
        return head + "".join("." + t for t in self.chain)


# ---------------------------------------------------------------------------
# log-value tables
# ---------------------------------------------------------------------------

_TABLES: dict = {}
_LOCK = threading.Lock()


def _table(spec, n):
    tab = _TABLES.get(spec)
    if tab is None or tab.shape[0] < n:
        size = max(n, 64) if tab is None else max(n, 2 * tab.shape[0])
        tab = _compute(spec, size)
        tab.setflags(write=False)
        with _LOCK:
            _TABLES[spec] = tab
    return tab


def clear_cache():
    """Drop all cached weight tables."""
    with _LOCK:
        _TABLES.clear()


def _base_log(spec, n):
    k = np.arange(1, n + 1, dtype=float)
    if spec.kind == "sl":
        return -np.log(k) / spec.params[0]
    if spec.kind == "exp":
        a, alpha = spec.params
        return -a * k**alpha
    vals = np.asarray(spec.params, dtype=float)
    out = np.full(n, -np.inf)
    m = min(n, vals.size)
    with np.errstate(divide="ignore"):
        out[:m] = np.log(vals[:m])
    return out


def _bar_of_base(spec, n):
    k = np.arange(1, n + 1, dtype=float)
    if spec.kind == "sl":
        # exact: (k!)^{-1/(p k)}
        return -gammaln(k + 1) / (spec.params[0] * k)
    if spec.kind == "exp" and spec.params[1] == 1.0:
        return -spec.params[0] * (k + 1) / 2
    return None


def _compute(spec, n):
    """Log-values of the full chain, first ``n`` entries."""
    # sizes needed at each level, outermost last
    sizes = [n]
    for tag in reversed(spec.chain):
        sizes.append((sizes[-1] + 1) // 2 if tag == DOT else sizes[-1])
    sizes.reverse()  # sizes[0] is base level, sizes[i+1] after chain[i]

    start = 0
    cur = None
    if spec.chain and spec.chain[0] == BAR:
        cur = _bar_of_base(spec, sizes[1])
        if cur is not None:
            start = 1
    if cur is None:
        cur = _base_log(spec, sizes[0])
    for i in range(start, len(spec.chain)):
        m = sizes[i + 1]
        if spec.chain[i] == DOT:
            cur = cur[np.arange(m) // 2]
        else:
            cur = np.cumsum(cur[:m]) / np.arange(1, m + 1)
    return np.ascontiguousarray(cur[:n], dtype=float)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def evaluate(w, k):
    """``w_k`` for ``k >= 1`` (explicit weights are zero past their list).

    ``k`` may be an integer array; the result then has the same shape.
    """
    if np.ndim(k) == 0:
        k = int(k)
        if k < 1:
            raise ValueError("weights are indexed from k = 1")
        return float(math.exp(w.log_values(k)[k - 1]))
    idx = np.asarray(k, dtype=np.int64)
    if idx.size == 0:
        return np.zeros(idx.shape)
    if idx.min() < 1:
        raise ValueError("weights are indexed from k = 1")
    return np.exp(w.log_values(int(idx.max()))[idx - 1])


def bar(w):
    """Successive geometric means ``(w_1 ... w_k)^(1/k)``."""
    return w.bar()


def dot(w):
    """Entry-doubled sequence ``(w_1, w_1, w_2, w_2, ...)``."""
    return w.dot()


def prefix_product(w, k):
    """``log(w_1 * ... * w_k)``; ``-inf`` if any factor is zero."""
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(np.sum(w.log_values(k)))


def log_prefix_products(w, n):
    """Cumulative ``log(w_1 ... w_k)`` for ``k = 1..n``."""
    return np.cumsum(w.log_values(n))


@dataclass(frozen=True)
class Precedence:
    """Outcome of probing ``v_k <= M w_k`` over ``k <= K``.

    ``constant`` is the least admissible ``M`` on the probe; ``failed_at`` the
    first index with ``w_k == 0 < v_k``; ``growing`` flags a ratio whose
    maximum sits in the second half of the probe and exceeds the first-half
    maximum, i.e. no bounded ``M`` is evidenced.
    """
    holds: bool
    constant: float
    failed_at: int | None
    growing: bool
    probe: int


def preceq(v, w, K=K_PROBE, m_cap=math.inf, rtol=1e-12):
    K = int(K)
    if K < 1:
        raise ValueError("probe length must be >= 1")
    lv = v.log_values(K)
    lw = w.log_values(K)
    bad = np.isneginf(lw) & ~np.isneginf(lv)
    if bad.any():
        k = int(np.argmax(bad)) + 1
        return Precedence(False, math.inf, k, False, K)
    with np.errstate(invalid="ignore"):
        logr = np.where(np.isneginf(lv), -np.inf, lv - lw)
    M = float(np.exp(np.max(logr)))
    half = K // 2
    growing = False
    if half >= 1 and K - half >= 1:
        first = np.max(logr[:half])
        second = np.max(logr[half:])
        growing = bool(second > first + rtol * max(1.0, abs(first)) and
                       np.argmax(logr) >= K - max(1, K // 10))
    holds = (not growing) and M <= m_cap
    return Precedence(holds, M, None, growing, K)


@dataclass(frozen=True)
class ExponentialConstants:
    """Fitted constants of the exponential-weight sandwiches."""
    a: float
    alpha: float
    c_bar: float
    c_dot_bar: float
    c_prod: float
    probe: int


def fit_exponential_constants(a, alpha, K=K_PROBE):
    """Smallest constants making the exponential lower bounds hold for ``k <= K``.

    For ``w_k = exp(-a k^alpha)``::

        log wbar_k       >= -a k^alpha/(alpha+1)         - c_bar     k^(alpha-1/2)
        log wdotbar_k    >= -2^-alpha a k^alpha/(alpha+1) - c_dot_bar k^(alpha-1/2)
        sum_n log wdotbar_n >= -2^-alpha a k^(alpha+1)/(alpha+1)^2 - c_prod k^(alpha+1/2)
    """
    w = WeightSpec.exponential(a, alpha)
    k = np.arange(1, K + 1, dtype=float)
    lb = w.bar().log_values(K)
    ldb = w.bar().dot().log_values(K)
    lp = np.cumsum(ldb)
    s = 2.0**-alpha
    c_bar = np.max((-lb - a * k**alpha / (alpha + 1)) / k ** (alpha - 0.5))
    c_dot = np.max((-ldb - s * a * k**alpha / (alpha + 1)) / k ** (alpha - 0.5))
    c_prod = np.max((-lp - s * a * k ** (alpha + 1) / (alpha + 1) ** 2) / k ** (alpha + 0.5))
    tiny = np.finfo(float).tiny
    return ExponentialConstants(float(a), float(alpha), max(float(c_bar), tiny),
                                max(float(c_dot), tiny), max(float(c_prod), tiny), K)


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_CHAIN_RE = re.compile(r"((?:\.(?:bar|dot))*)$")


def parse_weight(text):
    """Parse ``sl:p=1.5``, ``exp:a=0.5,alpha=1``, ``explicit:1,0.5`` (+ ``.bar``/``.dot``)."""
    s = text.strip()
    m = _CHAIN_RE.search(s)
    chain_txt = m.group(1) if m else ""
    head = s[: len(s) - len(chain_txt)]
    chain = tuple(t for t in chain_txt.split(".") if t)
    kind, sep, body = head.partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise ParseError(f"weight {text!r}: expected '<kind>:<params>'")
    try:
        if kind == "sl":
            kv = _keyvals(body, ("p",))
            spec = WeightSpec.schatten_lorentz(kv["p"])
        elif kind == "exp":
            kv = _keyvals(body, ("a", "alpha"))
            spec = WeightSpec.exponential(kv["a"], kv["alpha"])
        elif kind == "explicit":
            vals = [float(x) for x in body.split(",") if x.strip()]
            spec = WeightSpec.explicit(vals)
        else:
            raise ParseError(f"weight {text!r}: unknown kind {kind!r}")
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"weight {text!r}: {exc}") from None
    return WeightSpec(spec.kind, spec.params, chain)


def _keyvals(body, keys):
    out = {}
    for part in body.split(","):
        k, sep, v = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        out[k.strip().lower()] = float(v)
    missing = [k for k in keys if k not in out]
    extra = [k for k in out if k not in keys]
    if missing or extra:
        raise ValueError(f"expected keys {keys}, got {tuple(out)}")
    return out
