"""Binomial probability kernel.

The point mass is evaluated with Loader's saddle-point form: Stirling
remainders plus the deviance term ``bd0``, so there is no catastrophic
cancellation between large log-factorials.  This keeps ~15 significant
digits for ``n`` up to 1e7 and beyond, where a plain
``lgamma(n+1) - lgamma(k+1) - lgamma(n-k+1)`` loses 6-7 digits.

For ``n <= 32`` both the mass and the tails are summed exactly in
rational arithmetic over the binary value of ``p`` and rounded once, so
small worked examples such as 8-of-10 at p=1/2 come out exact.

Otherwise tail sums start at the cut point and walk away from the mode until the
terms stop contributing; the larger tail is obtained as a complement of
the smaller one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Real
from statistics import NormalDist
from typing import Iterable

from .errors import DomainError

__all__ = [
    "binom_pmf",
    "binom_logpmf",
    "binom_sf",
    "binom_cdf",
    "best_of_m",
    "intersect",
    "combine_results",
    "wilson_interval",
    "DEFAULT_INFORMATIVE_CUTOFF",
]

DEFAULT_INFORMATIVE_CUTOFF = 0.05

_LN_2PI = math.log(2.0 * math.pi)
_LN_SQRT_2PI = 0.5 * _LN_2PI
# Tail summation stops once a term is below this fraction of the running sum.
_REL_STOP = 1e-17
# Complement arithmetic may overshoot [0, 1] by at most this much.
_CLAMP_TOL = 1e-12
_EXACT_MAX_N = 32


def _check_count(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value}")
    return int(value)


def _check_prob(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not 0.0 <= value <= 1.0:  # also rejects NaN
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_query(k, n, p) -> tuple[int, int, float]:
    k = _check_count("k", k)
    n = _check_count("n", n)
    p = _check_prob("p", p)
    if k > n:
        raise DomainError(f"k={k} exceeds n={n}")
    return k, n, p


def _clamp(value: float) -> float:
    if value < -_CLAMP_TOL or value > 1.0 + _CLAMP_TOL:
        raise ArithmeticError(f"probability {value!r} escaped [0, 1] beyond tolerance")
    return min(1.0, max(0.0, value))


def _stirlerr(n: int) -> float:
    """log(n!) - log(sqrt(2 pi n) (n/e)^n)."""
    if n <= 15:
        if n == 0:
            return 0.0
        return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI
    s0, s1, s2, s3, s4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
    nn = float(n) * n
    if n > 500:
        return (s0 - s1 / nn) / n
    if n > 80:
        return (s0 - (s1 - s2 / nn) / nn) / n
    if n > 35:
        return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n


def _bd0(x: float, np_: float) -> float:
    """Deviance term x*log(x/np) + np - x, stable for x close to np."""
    if abs(x - np_) < 0.1 * (x + np_):
        v = (x - np_) / (x + np_)
        s = (x - np_) * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / np_) + np_ - x


def _logpmf_raw(k: int, n: int, p: float, q: float) -> float:
    # p and q are passed separately so that q = 1 - p is never re-derived
    # from a rounded value (matters for tiny p).
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if q == 0.0:
        return 0.0 if k == n else -math.inf
    if k == 0:
        if n == 0:
            return 0.0
        return -_bd0(n, n * q) - n * p if p < 0.1 else n * math.log(q)
    if k == n:
        return -_bd0(n, n * p) - n * q if q < 0.1 else n * math.log(p)
    lc = (
        _stirlerr(n)
        - _stirlerr(k)
        - _stirlerr(n - k)
        - _bd0(k, n * p)
        - _bd0(n - k, n * q)
    )
    lf = _LN_2PI + math.log(k) + math.log1p(-k / n)
    return lc - 0.5 * lf


def _pmf_raw(k: int, n: int, p: float, q: float) -> float:
    # Edge masses via pow: correctly rounded for small n, so e.g. a single
    # trial at p=0.01 returns exactly 0.01.
    if k == n and q >= 0.1 and p > 0.0:
        return p**n
    if k == 0 and p >= 0.1 and q > 0.0:
        return q**n
    return math.exp(_logpmf_raw(k, n, p, q))


def _exact_sum(lo: int, hi: int, n: int, p: float) -> float:
    """sum_{j=lo..hi} P[X = j], exactly, rounded once."""
    fp = Fraction(p)
    fq = 1 - fp
    return float(sum(math.comb(n, j) * fp**j * fq ** (n - j) for j in range(lo, hi + 1)))


def _mode(n: int, p: float) -> int:
    return min(n, int(math.floor((n + 1) * p)))


def _upper_tail(k: int, n: int, p: float, q: float) -> float:
    """P[X >= k] for X ~ Bin(n, p), with q = 1 - p supplied explicitly."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if q == 0.0:
        return 1.0
    mode = _mode(n, p)
    if k > n * p:
        total = 0.0
        for j in range(k, n + 1):
            term = _pmf_raw(j, n, p, q)
            total += term
            if j >= mode and term <= total * _REL_STOP:
                break
        return _clamp(total)
    # Upper tail is the big one; sum the lower tail P[X <= k-1] downward.
    total = 0.0
    for j in range(k - 1, -1, -1):
        term = _pmf_raw(j, n, p, q)
        total += term
        if j <= mode and term <= total * _REL_STOP:
            break
    return _clamp(1.0 - total)


def binom_pmf(k: int, n: int, p: float) -> float:
    """P[X = k] for X ~ Binomial(n, p).

    >>> binom_pmf(8, 10, 0.5) == 45 / 1024
    True
    """
    k, n, p = _check_query(k, n, p)
    if n <= _EXACT_MAX_N:
        fp = Fraction(p)
        return float(math.comb(n, k) * fp**k * (1 - fp) ** (n - k))
    return _pmf_raw(k, n, p, 1.0 - p)


def binom_logpmf(k: int, n: int, p: float) -> float:
    """Natural log of :func:`binom_pmf`; finite where the mass underflows."""
    k, n, p = _check_query(k, n, p)
    return _logpmf_raw(k, n, p, 1.0 - p)


def binom_sf(k: int, n: int, p: float) -> float:
    """P[X >= k]: the chance of ``k`` or more successes in ``n`` trials.

    This is the "equal or better" probability for a record of ``k`` wins
    out of ``n`` when a random guess wins with probability ``p``.
    """
    k, n, p = _check_query(k, n, p)
    if n <= _EXACT_MAX_N:
        return _exact_sum(k, n, n, p)
    return _upper_tail(k, n, p, 1.0 - p)


def binom_cdf(k: int, n: int, p: float) -> float:
    """P[X <= k], evaluated as the upper tail of the mirrored count n - X."""
    k, n, p = _check_query(k, n, p)
    if n <= _EXACT_MAX_N:
        return _exact_sum(0, k, n, p)
    return _upper_tail(n - k, n, 1.0 - p, p)


def _at_least_one(prob: float, m: int) -> float:
    if m == 1 or prob == 0.0:
        return prob
    if prob == 1.0:
        return 1.0
    return _clamp(-math.expm1(m * math.log1p(-prob)))


def best_of_m(k: int, n: int, p: float, m: int = 1) -> float:
    """Chance that at least one of ``m`` random attempts reaches ``k`` of ``n``.

    Equal to ``1 - (1 - binom_sf(k, n, p)) ** m``; evaluated through
    ``log1p``/``expm1`` so tiny single-attempt values keep their digits.
    """
    sf = binom_sf(k, n, p)
    m = _check_count("m", m)
    if m == 0:
        raise DomainError("m must be at least 1")
    return _at_least_one(sf, m)


def intersect(p1: float, p2: float) -> float:
    """Uncertainty of the joint result of two independent results."""
    return _check_prob("p1", p1) * _check_prob("p2", p2)


def combine_results(
    ps: Iterable[float], informative_cutoff: float = DEFAULT_INFORMATIVE_CUTOFF
) -> float:
    """Uncertainty of the intersection of several results.

    Results below ``informative_cutoff`` are intersected (multiplied).
    Each result at or above the cutoff carries no evidence and only counts
    as one more attempt at producing the informative part, so with ``q``
    the product of informative values and ``r`` non-informative results the
    answer is ``1 - (1 - q) ** (1 + r)``.
    """
    values = [_check_prob("probability", p) for p in ps]
    if not values:
        raise DomainError("combine_results needs at least one probability")
    cutoff = _check_prob("informative_cutoff", informative_cutoff)
    if not 0.0 < cutoff < 1.0:
        raise DomainError(f"informative_cutoff must lie in (0, 1), got {cutoff}")
    q = 1.0
    extra = 0
    for value in values:
        if value < cutoff:
            q *= value
        else:
            extra += 1
    return _at_least_one(q, 1 + extra)


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    x = _check_count("successes", successes)
    n = _check_count("trials", trials)
    if n == 0:
        raise DomainError("trials must be at least 1")
    if x > n:
        raise DomainError(f"successes={x} exceeds trials={n}")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    z2 = z * z
    denom = n + z2
    centre = (x + z2 / 2.0) / denom
    half = z * math.sqrt(x * (n - x) / n + z2 / 4.0) / denom
    lower = 0.0 if x == 0 else max(0.0, centre - half)
    upper = 1.0 if x == n else min(1.0, centre + half)
    # Guard the ordering against rounding when x/n sits at an endpoint.
    phat = x / n
    return min(lower, phat), max(upper, phat)

