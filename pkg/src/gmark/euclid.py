"""Classical and k-shifted Euclid trees over exact rationals, plus Fibonacci
helpers used for the comparison-sequence bounds."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import List, Sequence, Tuple

from .core import RatTriple, ReducedSeq, others

PHI_DIGITS = 40


def _rat(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


def as_rat_triple(t: Sequence) -> RatTriple:
    out = tuple(_rat(v) for v in t)
    if len(out) != 3 or any(v <= 0 for v in out):
        raise ValueError(f"expected three positive rationals, got {t!r}")
    return out


@dataclass(frozen=True)
class EuclidParams:
    """Shift ``k`` and root triple of a k-generalized Euclid tree."""

    k: Fraction
    init: RatTriple

    def __init__(self, k=0, init=(1, 1, 1)):
        k = _rat(k)
        if k < 0:
            raise ValueError("k must be nonnegative")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "init", as_rat_triple(init))
        if not is_k_initial(self.init, self.k):
            warnings.warn(f"{self.init} is not a k-initial triple for k={self.k}", stacklevel=2)


def is_k_initial(t: Sequence, k) -> bool:
    """No component equals k plus the sum of the other two."""
    a, b, c = t
    return a != b + c + k and b != a + c + k and c != a + b + k


def euclid_mutate(t: Sequence, i: int, k=0) -> RatTriple:
    a_idx, b_idx = others(i)
    out = list(t)
    out[i - 1] = k + t[a_idx - 1] + t[b_idx - 1]
    return tuple(out)


def euclid_chain(w: Sequence[int], p: EuclidParams) -> List[RatTriple]:
    t = p.init
    out = [t]
    for i in ReducedSeq(w):
        t = euclid_mutate(t, i, p.k)
        out.append(t)
    return out


def tree_iso(w: Sequence[int], pE: EuclidParams, pK: EuclidParams) -> Tuple[RatTriple, RatTriple]:
    """The pair of triples sitting at address ``w`` in the two trees."""
    return euclid_chain(w, pE)[-1], euclid_chain(w, pK)[-1]


def fibonacci(n: int) -> int:
    """F_n with F_0 = 0, F_1 = 1, by fast doubling."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def pair(m):
        if m == 0:
            return 0, 1
        a, b = pair(m >> 1)
        c = a * (2 * b - a)
        d = a * a + b * b
        return (d, c + d) if m & 1 else (c, d)

    return pair(n)[0]


@lru_cache(maxsize=None)
def phi_bounds(digits: int = PHI_DIGITS) -> Tuple[Fraction, Fraction]:
    """Rationals lo < phi < hi with hi - lo <= 10**-digits."""
    scale = 10 ** digits
    s = isqrt(5 * scale * scale)  # s <= sqrt(5)*scale < s + 1
    lo = Fraction(scale + s, 2 * scale)
    hi = Fraction(scale + s + 1, 2 * scale)
    return lo, hi


def fib_reciprocal_sum(n_terms: int) -> Tuple[Fraction, Fraction]:
    """Exact partial sum of 1/F_n for n <= n_terms and a rigorous tail bound.

    Uses F_n >= phi^(n-2), so the tail over n > N is at most
    phi^(1-N) / (1 - 1/phi) = phi^(3-N).  Powers are taken of a lower
    bound for phi when the exponent is negative, so the result is an
    overestimate.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    partial = Fraction(0)
    a, b = 0, 1
    for _ in range(n_terms):
        a, b = b, a + b
        partial += Fraction(1, a)
    lo, hi = phi_bounds()
    e = 3 - n_terms
    tail = hi ** e if e >= 0 else 1 / lo ** (-e)
    return partial, tail


def comparison_upper_bound(base, k, n_terms: int = 64) -> Fraction:
    """base + 2k * (sum of 1/F_n), with the sum bounded from above."""
    base, k = _rat(base), _rat(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return base
    partial, tail = fib_reciprocal_sum(n_terms)
    return base + 2 * k * (partial + tail)
