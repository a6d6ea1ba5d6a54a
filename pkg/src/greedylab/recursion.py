"""Laws of X_{d,r} and Y_{d,r}, their generating functions, and the closed-form limits.

X_{0,r} = 1 and X_{d,r} = (C + 1) B(C + 1) with C the r-fold convolution of
X_{d-1,r}; Y_{0,r} = 0 and Y_{d,r} is the r-fold convolution of
(Y_{d-1,r} + 1) B(Y_{d-1,r} + 1).  Here B(k) is Bernoulli(1/k) coupled to its
argument, so the transform Z -> (Z + 1) B(Z + 1) maps P(Z = k - 1) to
P = (1/k) P(Z = k - 1) at k and the remainder to 0.

Pmfs are truncated at K.  Every stored probability is a lower bound on the
true one and ``tail_mass`` is the unaccounted remainder, so any functional
can be bracketed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .weights import WeightDistribution

TAIL_LIMIT = 1e-6
ROUNDING = 1e-13


class TruncationTooSmall(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Pmf:
    probs: np.ndarray
    tail_mass: float
    params: tuple = ()

    @property
    def K(self) -> int:
        return len(self.probs) - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))

    def total(self) -> float:
        return float(self.probs.sum()) + self.tail_mass


def default_truncation(r: int, d: int) -> int:
    return 64 * r * (d + 1)


def _finish(p: np.ndarray, params) -> Pmf:
    p = np.clip(p, 0.0, None)
    s = float(p.sum())
    if s > 1.0 - ROUNDING:
        # rounding-level gap: left alone it is multiplied by r at every level
        p = p / s
        s = 1.0
    p.setflags(write=False)
    return Pmf(p, max(0.0, 1.0 - s), params)


def point_mass(k: int, K: int) -> Pmf:
    p = np.zeros(K + 1)
    p[k] = 1.0
    return _finish(p, ("point", k, K))


def convolve_power(p: np.ndarray, r: int, K: int) -> np.ndarray:
    """r-fold self-convolution truncated at K."""
    out = np.zeros(K + 1)
    out[0] = 1.0
    for _ in range(r):
        out = np.convolve(out, p)[: K + 1]
    return out


def size_biased_thin(p: np.ndarray) -> np.ndarray:
    """Law of (Z + 1) B(Z + 1) from the law of Z, truncated to the same length."""
    K = len(p) - 1
    k = np.arange(1, K + 1)
    q = np.zeros(K + 1)
    q[1:] = p[:K] / k
    q[0] = float(np.dot(p[:K], (k - 1) / k)) + p[K] * K / (K + 1)
    return q


def x_step(p: Pmf, r: int) -> Pmf:
    c = convolve_power(p.probs, r, p.K)
    return _finish(size_biased_thin(c), p.params)


def y_step(p: Pmf, r: int) -> Pmf:
    return _finish(convolve_power(size_biased_thin(p.probs), r, p.K), p.params)


@lru_cache(maxsize=256)
def _x_cached(r: int, d: int, K: int) -> Pmf:
    if d == 0:
        return point_mass(1, K)
    prev = _x_cached(r, d - 1, K)
    out = x_step(prev, r)
    return Pmf(out.probs, out.tail_mass, (r, d, K))


@lru_cache(maxsize=256)
def _y_cached(r: int, d: int, K: int) -> Pmf:
    if d == 0:
        return point_mass(0, K)
    prev = _y_cached(r, d - 1, K)
    out = y_step(prev, r)
    return Pmf(out.probs, out.tail_mass, (r, d, K))


def _check(p: Pmf) -> Pmf:
    if p.tail_mass > TAIL_LIMIT:
        raise TruncationTooSmall(f"tail mass {p.tail_mass:.3g} exceeds {TAIL_LIMIT:g}; raise K")
    return p


def x_pmf(r: int, d: int, K: int | None = None) -> Pmf:
    if r < 1 or d < 0:
        raise ValueError("need r >= 1 and d >= 0")
    K = default_truncation(r, d) if K is None else K
    if K < 1:
        raise ValueError("K must be >= 1")
    return _check(_x_cached(r, d, K))


def y_pmf(r: int, d: int, K: int | None = None) -> Pmf:
    if r < 1 or d < 0:
        raise ValueError("need r >= 1 and d >= 0")
    K = default_truncation(r, d) if K is None else K
    if K < r:
        raise ValueError("K must be >= r")
    return _check(_y_cached(r, d, K))


def pgf(p: Pmf, s) -> np.ndarray | float:
    """Truncated generating function; the true value lies in [pgf, pgf + tail_mass]."""
    s = np.asarray(s, dtype=float)
    if np.any((s < 0) | (s > 1)):
        raise ValueError("s must lie in [0, 1]")
    val = np.polynomial.polynomial.polyval(s, p.probs)
    return val if val.ndim else float(val)


def pgf_interval(p: Pmf, s) -> tuple:
    lo = pgf(p, s)
    return lo, lo + p.tail_mass


def limiting_pgf_x(r: int, s):
    return (r - (r - 1) * np.asarray(s, dtype=float)) ** (-1.0 / (r - 1))


def limiting_pgf_y(r: int, s):
    return (r - (r - 1) * np.asarray(s, dtype=float)) ** (-float(r) / (r - 1))


def sample_w_max(dist: WeightDistribution, p: Pmf, rng, size: int | None = None):
    """W^<X>: max of k i.i.d. weights with k drawn from ``p`` (0 when k = 0)."""
    n = 1 if size is None else size
    probs = p.probs / p.probs.sum()
    ks = rng.choice(len(probs), size=n, p=probs)
    out = np.zeros(n)
    # max of k i.i.d. draws = F^{-1}(U^{1/k})
    pos = ks > 0
    u = rng.random(pos.sum())
    out[pos] = dist.ppf(u ** (1.0 / ks[pos]))
    return float(out[0]) if size is None else out


# ---------------------------------------------------------------------------
# root statistics on T(r, r-1, d), uniform(0,1) weights


def _poly_moment(coeffs: np.ndarray, power: int) -> float:
    """∫_0^1 u^power · Σ c_k u^k du."""
    k = np.arange(len(coeffs))
    return float(np.sum(coeffs / (k + power + 1)))


def root_is_polynomial(r: int, d: int, K: int | None = None) -> tuple[np.ndarray, float]:
    """Coefficients of φ_{X_{d-1,r-1}}(s)^r and the probability mass they may miss."""
    p = x_pmf(r - 1, d - 1, K)
    c = convolve_power(p.probs, r, p.K)
    return c, max(0.0, 1.0 - float(c.sum()))


def root_edge_polynomial(r: int, d: int, K: int | None = None) -> tuple[np.ndarray, float]:
    """Coefficients of φ_{Y_{d-1,r-1}}(s) φ_{Y_{d,r-1}}(s)."""
    a = y_pmf(r - 1, d - 1, K)
    b = y_pmf(r - 1, d, a.K)
    c = np.convolve(a.probs, b.probs)[: a.K + 1]
    return c, max(0.0, 1.0 - float(c.sum()))


def tree_root_is_probability(r: int, d: int, K: int | None = None) -> tuple[float, float]:
    """P(root ∈ IG(T(r, r-1, d))) = E[φ_{X_{d-1,r-1}}(U)^r]; returns (lower, upper)."""
    c, missing = root_is_polynomial(r, d, K)
    lo = _poly_moment(c, 0)
    return lo, lo + missing


def tree_root_is_weight(r: int, d: int, K: int | None = None) -> tuple[float, float]:
    """E[U 1{root ∈ IG}] for uniform(0,1) node weights; returns (lower, upper)."""
    c, missing = root_is_polynomial(r, d, K)
    lo = _poly_moment(c, 1)
    return lo, lo + missing


def tree_root_edge_probability(r: int, d: int, K: int | None = None) -> tuple[float, float]:
    """P((0, j) ∈ MG(T(r, r-1, d))) for a fixed root edge; returns (lower, upper)."""
    c, missing = root_edge_polynomial(r, d, K)
    lo = _poly_moment(c, 0)
    return lo, lo + missing
