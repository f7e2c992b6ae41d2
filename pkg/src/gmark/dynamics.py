"""Comparison triples, ratio sequences and log-domain Markov chains.

A comparison triple is the componentwise quotient K/E of a k-shifted
Euclid triple K by the classical Euclid triple E at the same address.
Mutating direction i replaces its component by a weighted mean of the
other two plus k/(E_a + E_b), which is what ``delta_mutate`` computes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, List, Optional, Sequence, Tuple

from . import markov
from .core import LambdaParams, RatTriple, ReducedSeq, TailClass, classify_tail, others
from .euclid import EuclidParams, euclid_mutate

TAIL_WINDOW = 12
EXACT_MAX_DEPTH = 64
LOG_MAX_DEPTH = 10_000
DEFAULT_EPS = 1e-9


class ArgmaxMutation(ValueError):
    pass


class NoConvergence(RuntimeError):
    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


def spread(c: Sequence) -> Fraction:
    a, b, d = c
    return max(a, b, d) - min(a, b, d)


@dataclass(frozen=True)
class ComparisonState:
    comp: RatTriple
    euclid: RatTriple
    kval: Fraction
    step: Optional[int] = None  # direction that produced this state

    @property
    def spread(self) -> Fraction:
        return spread(self.comp)

    @property
    def min(self) -> Fraction:
        return min(self.comp)

    @classmethod
    def start(cls, pK: EuclidParams, pE: EuclidParams) -> "ComparisonState":
        comp = tuple(a / b for a, b in zip(pK.init, pE.init))
        return cls(comp, pE.init, pK.k)


def delta_mutate(s: ComparisonState, i: int) -> ComparisonState:
    a, b = (p - 1 for p in others(i))
    ea, eb = s.euclid[a], s.euclid[b]
    tot = ea + eb
    comp = list(s.comp)
    comp[i - 1] = (ea * s.comp[a] + eb * s.comp[b] + s.kval) / tot
    return ComparisonState(tuple(comp), euclid_mutate(s.euclid, i), s.kval, i)


def internal_division_pred(s: ComparisonState, i: int) -> Tuple[bool, Fraction]:
    """Whether mutating ``i`` lands between the two other components.

    The new value always sits above the smaller one; it stays below the
    larger one iff k <= E_small * (larger - smaller), where E_small is the
    Euclid component under the smaller comparison value.
    """
    a, b = (p - 1 for p in others(i))
    ca, cb = s.comp[a], s.comp[b]
    if ca == cb:
        return s.kval == 0, Fraction(0)
    small = a if ca < cb else b
    threshold = s.euclid[small] * abs(ca - cb)
    return s.kval <= threshold, threshold


def run_comparison(w: Sequence[int], pK: EuclidParams, pE: EuclidParams) -> List[ComparisonState]:
    s = ComparisonState.start(pK, pE)
    out = [s]
    for i in ReducedSeq(w):
        s = delta_mutate(s, i)
        out.append(s)
    return out


def _tail(seq: Sequence[int]) -> Optional[TailClass]:
    if len(seq) < 2:
        return None
    return classify_tail(seq, min(len(seq), TAIL_WINDOW))


def _reduced_stream(w_gen: Iterable[int]):
    prev = None
    for i in w_gen:
        if i not in (1, 2, 3):
            raise ValueError(f"direction {i!r} is not in {{1,2,3}}")
        if i == prev:
            raise ValueError(f"sequence repeats direction {i}")
        prev = i
        yield i


@dataclass
class QEuclidEstimate:
    q: float
    spread: float
    depth: int
    tail_class: Optional[TailClass]
    closed_form: Optional[float] = None
    exact_q: Optional[Fraction] = None
    seq: List[int] = field(default_factory=list)


def estimate_q_euclid(
    w_gen: Iterable[int],
    pK: EuclidParams,
    pE: EuclidParams,
    eps: float = DEFAULT_EPS,
    max_depth: int = EXACT_MAX_DEPTH,
) -> QEuclidEstimate:
    """Follow the comparison chain until it settles.

    All three directions in the recent window: stop when the spread drops
    below eps, q is the minimum component.  One direction s missing: the
    active components tend to (K_s + k)/E_s, reported as ``closed_form``;
    stop once the smaller active component is within eps of it.
    """
    s = ComparisonState.start(pK, pE)
    seq: List[int] = []

    def estimate():
        tail = _tail(seq)
        est = QEuclidEstimate(float(s.min), float(s.spread), len(seq), tail, seq=list(seq))
        est.exact_q = s.min
        if tail is not None and tail.missing is not None:
            m = tail.missing - 1
            cf = s.comp[m] + s.kval / s.euclid[m]
            est.closed_form = float(cf)
            a, b = (p - 1 for p in others(tail.missing))
            est.exact_q = min(s.comp[a], s.comp[b])
            est.q = float(est.exact_q)
            est.spread = float(abs(est.exact_q - cf))
        return est

    def settled() -> bool:
        tail = _tail(seq)
        if tail is None or tail.missing is None:
            return s.spread < eps
        return estimate().spread < eps

    if settled():
        return estimate()
    for i in islice(_reduced_stream(w_gen), max_depth):
        s = delta_mutate(s, i)
        seq.append(i)
        if settled():
            return estimate()
    partial = estimate()
    raise NoConvergence(f"no convergence within depth {len(seq)} (spread {partial.spread:.3g})", partial)


# ratio sequences

def ratio_step(t: Sequence[int], i: int, lam: LambdaParams) -> Fraction:
    """New component of mu_i(t) over the product of the two others."""
    if markov.argmax_index(t) == i:
        raise ArgmaxMutation(f"direction {i} is the strict maximum of {tuple(t)}")
    new = markov.mutate(t, i, lam)
    a, b = others(i)
    return Fraction(new[i - 1], t[a - 1] * t[b - 1])


def log_ratio_value(t: Sequence[float], i: int, lam: LambdaParams) -> float:
    """Ratio k for mutating ``i`` from the log triple ``t`` of a solution.

    Uses x_i + x_i' = k_lam x_j x_k - l_k x_j - l_j x_k, so
    k = k_lam - x_i/(x_j x_k) - l_k/x_k - l_j/x_j, where every subtracted
    term is small; nothing cancels catastrophically.
    """
    j, k = others(i)
    xi, xj, xk = t[i - 1], t[j - 1], t[k - 1]
    return (
        lam.k_lambda
        - math.exp(xi - xj - xk)
        - lam.coef(k) * math.exp(-xk)
        - lam.coef(j) * math.exp(-xj)
    )


@dataclass
class RatioSeries:
    values: list
    mode: str
    lam: LambdaParams

    def is_strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def is_bounded(self) -> bool:
        return all(v < self.lam.k_lambda for v in self.values)


def ratio_series(
    w: Sequence[int],
    lam: LambdaParams,
    mode: str = "exact",
    digit_budget: int = markov.DEFAULT_DIGIT_BUDGET,
) -> RatioSeries:
    w = ReducedSeq(w)
    values = []
    if mode == "exact":
        guard = markov._DigitGuard(digit_budget)
        t = (1, 1, 1)
        for depth, i in enumerate(w):
            values.append(ratio_step(t, i, lam))
            t = markov.mutate(t, i, lam)
            if guard.exceeded(t[i - 1]):
                raise markov.DigitBudgetExceeded(depth, digit_budget)
    elif mode == "log":
        t = (0.0, 0.0, 0.0)
        for i in w:
            if markov.argmax_index(t) == i:
                raise ArgmaxMutation(f"direction {i} is the strict maximum")
            values.append(log_ratio_value(t, i, lam))
            t = log_mutate(t, i, lam)
    else:
        raise ValueError(f"mode must be exact or log, got {mode!r}")
    return RatioSeries(values, mode, lam)


# log-domain engine

def log_mutate(t: Sequence[float], i: int, lam: LambdaParams) -> Tuple[float, float, float]:
    """log of mutation ``i`` applied to exp(t), without leaving log space."""
    j, k = others(i)
    b, c = t[j - 1], t[k - 1]
    d = abs(b - c)
    new = b + c + d + math.log1p(lam.coef(i) * math.exp(-d) + math.exp(-2 * d)) - t[i - 1]
    out = list(t)
    out[i - 1] = new
    return tuple(out)


def log_chain(w: Sequence[int], lam: LambdaParams, start=(0.0, 0.0, 0.0)) -> List[Tuple[float, float, float]]:
    t = tuple(float(v) for v in start)
    out = [t]
    for i in ReducedSeq(w):
        t = log_mutate(t, i, lam)
        out.append(t)
    return out


def log_quotients(w: Sequence[int], lam: LambdaParams) -> List[Tuple[float, float, float]]:
    """(log Markov)/(classical Euclid) along ``w`` from (1,1,1)."""
    t = (0.0, 0.0, 0.0)
    e = (1, 1, 1)
    out = [t]
    for i in ReducedSeq(w):
        t = log_mutate(t, i, lam)
        e = euclid_mutate(e, i)
        out.append(tuple(a / b for a, b in zip(t, e)))
    return out


@dataclass
class QLogEstimate:
    q: float
    per_component: Tuple[float, float, float]
    depth: int
    tail_class: Optional[TailClass]
    spread: float
    cesaro: Optional[float] = None
    log_ratio: Optional[float] = None
    q_trajectory: List[float] = field(default_factory=list)
    seq: List[int] = field(default_factory=list)


def estimate_q_log(
    w_gen: Iterable[int],
    lam: LambdaParams,
    eps: float = DEFAULT_EPS,
    max_depth: int = LOG_MAX_DEPTH,
) -> QLogEstimate:
    """Estimate the limit of (log Markov)/(Euclid) along a sequence.

    With all three directions recurring, q is the smallest quotient and the
    run stops when the quotients agree within eps.  With direction s
    missing from the recent window, the active quotients only converge
    like 1/depth; instead q is estimated as (log x_s + log k)/E_s, where k
    is the latest ratio number, and the run stops when two successive
    estimates agree within eps.
    """
    t = (0.0, 0.0, 0.0)
    e = (1, 1, 1)
    seq: List[int] = []
    traj: List[float] = []
    last_k: Optional[float] = None

    def snapshot() -> QLogEstimate:
        quot = tuple(a / float(b) for a, b in zip(t, e))
        tail = _tail(seq)
        est = QLogEstimate(min(quot), quot, len(seq), tail, max(quot) - min(quot), seq=list(seq))
        if tail is not None and tail.missing is not None and last_k is not None:
            s = tail.missing - 1
            lk = math.log(last_k)
            est.log_ratio = lk
            est.cesaro = (t[s] + lk) / e[s]
            est.q = est.cesaro
            est.spread = abs(traj[-1] - traj[-2]) if len(traj) >= 2 else math.inf
        est.q_trajectory = list(traj)
        return est

    def settled(est: QLogEstimate) -> bool:
        return est.spread < eps

    est = snapshot()
    for i in islice(_reduced_stream(w_gen), max_depth):
        if seq and markov.argmax_index(t) == i:
            raise ArgmaxMutation(f"direction {i} is the strict maximum at depth {len(seq)}")
        last_k = log_ratio_value(t, i, lam)
        t = log_mutate(t, i, lam)
        e = euclid_mutate(e, i)
        seq.append(i)
        if not all(math.isfinite(v) for v in t):
            break
        tail = _tail(seq)
        if tail is not None and tail.missing is not None:
            s = tail.missing - 1
            traj.append((t[s] + math.log(last_k)) / e[s])
        else:
            traj.clear()
        try:
            est = snapshot()
        except OverflowError:
            break
        if settled(est):
            return est
    if not seq:
        return est
    raise NoConvergence(f"no convergence within depth {len(seq)} (spread {est.spread:.3g})", est)
