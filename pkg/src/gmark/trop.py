"""Max-plus shadow of the Markov tree.

Integer triples mutate by x_i -> max(2x_j, 2x_k) - x_i.  Seeding such a
triple with the argmax pattern of a Markov solution makes the tropical
chain follow the classical Euclid tree step by step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import markov
from .core import LambdaParams, ReducedSeq, Triple, others
from .euclid import euclid_mutate


class NoStrictArgmax(ValueError):
    pass


def is_trop_solution(t: Sequence[int]) -> bool:
    x1, x2, x3 = t
    return max(2 * x1, 2 * x2, 2 * x3) == x1 + x2 + x3


def trop_mutate(t: Sequence[int], i: int) -> Triple:
    a_idx, b_idx = others(i)
    out = list(t)
    out[i - 1] = max(2 * t[a_idx - 1], 2 * t[b_idx - 1]) - t[i - 1]
    return tuple(out)


def seed_from_markov(m: Sequence[int], a: int = 2, b: int = 1) -> Triple:
    """A tropical solution with the same order pattern as ``m``.

    Distinct entries get (a+b, a, b) placed by rank.  When the two smaller
    entries tie (the singular solutions (l+2,1,1) and permutations) they
    get (2a, a, a), which is (4,2,2) for the defaults.  (1,1,1) maps to
    (0,0,0).
    """
    if not a > b > 0:
        raise ValueError("need a > b > 0")
    m = tuple(m)
    if len(set(m)) == 1:
        if m != (1, 1, 1):
            raise NoStrictArgmax(f"{m} has no strict maximum")
        return (0, 0, 0)
    top = markov.argmax_index(m)
    if top == markov.TIE:
        raise NoStrictArgmax(f"{m} has a repeated maximum")
    out = [0, 0, 0]
    if len(set(m)) == 2:
        for p in range(3):
            out[p] = 2 * a if p == top - 1 else a
        return tuple(out)
    order = sorted(range(3), key=lambda p: m[p])
    out[order[0]], out[order[1]], out[order[2]] = b, a, a + b
    return tuple(out)


@dataclass
class CorrespondenceReport:
    ok: bool
    markov: List[Triple] = field(default_factory=list)
    trop: List[Triple] = field(default_factory=list)
    euclid: List[Triple] = field(default_factory=list)
    seed_depth: Optional[int] = None
    divergence: Optional[int] = None
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seed_depth": self.seed_depth,
            "divergence": self.divergence,
            "reason": self.reason,
            "markov": [[str(v) for v in t] for t in self.markov],
            "trop": [list(t) for t in self.trop],
            "euclid": [[int(v) for v in t] for t in self.euclid],
        }


def verify_correspondence(w: Sequence[int], lam: LambdaParams, start: Triple = (1, 1, 1)) -> CorrespondenceReport:
    """Run the Markov, tropical and Euclid chains side by side.

    The tropical seed is taken at the first Markov triple along the chain
    that has a strict maximum; earlier steps pass through singular
    solutions and are skipped.  From the seed on, the tropical chain must
    equal the Euclid chain and its argmax must track the Markov argmax.
    """
    w = ReducedSeq(w)
    mk = markov.chain(w, lam, start).triples
    rep = CorrespondenceReport(ok=True, markov=list(mk))
    seed_at = None
    for d, t in enumerate(mk):
        if markov.argmax_index(t) != markov.TIE:
            seed_at = d
            break
    if seed_at is None:
        rep.reason = "no triple with a strict maximum; nothing to compare"
        return rep
    rep.seed_depth = seed_at
    tt = seed_from_markov(mk[seed_at])
    et = tt
    rep.trop.append(tt)
    rep.euclid.append(et)
    for d in range(seed_at, len(w)):
        i = w[d]
        tt = trop_mutate(tt, i)
        et = euclid_mutate(et, i)
        rep.trop.append(tt)
        rep.euclid.append(et)
        m = mk[d + 1]
        if tt != et:
            rep.ok, rep.divergence = False, d + 1
            rep.reason = f"tropical {tt} differs from Euclid {et}"
            return rep
        if not is_trop_solution(tt):
            rep.ok, rep.divergence = False, d + 1
            rep.reason = f"tropical {tt} is not a tropical solution"
            return rep
        if markov.argmax_index(m) != markov.argmax_index(tt):
            rep.ok, rep.divergence = False, d + 1
            rep.reason = f"argmax of {m} and {tt} differ"
            return rep
    rep.reason = "chains agree"
    return rep


def trop_limit_check(x: Sequence[int], lam: LambdaParams, C: float) -> Tuple[float, int]:
    """(log F(e^{C x}) / C, max(2x) - sum(x)) for the Markov Laurent
    polynomial F = (sum of squares + cross terms) / (x1 x2 x3).

    Exponents are shifted by the sum before scaling so the largest term
    is exactly the tropical value; the log-sum-exp then only adds a
    correction in [0, log(k_lambda)/C].
    """
    if C <= 0:
        raise ValueError("C must be positive")
    x1, x2, x3 = x
    s = x1 + x2 + x3
    terms = [
        (1, 2 * x1), (1, 2 * x2), (1, 2 * x3),
        (lam.l3, x1 + x2), (lam.l1, x2 + x3), (lam.l2, x3 + x1),
    ]
    terms = [(c, e - s) for c, e in terms if c]
    top = max(e for _, e in terms)
    acc = math.fsum(c * math.exp(C * (e - top)) for c, e in terms)
    exact = max(2 * x1, 2 * x2, 2 * x3) - s
    return top + math.log(acc) / C, exact
