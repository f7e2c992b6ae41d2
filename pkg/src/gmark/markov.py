"""Exact big-integer engine for the generalized Markov equation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import LambdaParams, ReducedSeq, Triple, others

DEFAULT_DIGIT_BUDGET = 200_000
TIE = "tie"
PARALLEL_MIN_FRONTIER = 256


class NonIntegerResult(ValueError):
    pass


class NotASolution(ValueError):
    pass


class DigitBudgetExceeded(RuntimeError):
    def __init__(self, depth: int, budget: int):
        super().__init__(
            f"a component exceeded {budget} decimal digits; last safe depth is {depth}"
        )
        self.depth = depth
        self.budget = budget


def is_solution(t: Sequence[int], lam: LambdaParams) -> bool:
    x1, x2, x3 = t
    lhs = x1 * x1 + x2 * x2 + x3 * x3 + lam.l3 * x1 * x2 + lam.l1 * x2 * x3 + lam.l2 * x3 * x1
    return lhs == lam.k_lambda * x1 * x2 * x3


def mutate(t: Sequence[int], i: int, lam: LambdaParams) -> Triple:
    """Replace component ``i`` by (a^2 + l_i a b + b^2) / x_i.

    Raises NonIntegerResult when the quotient is not an integer, which only
    happens for inputs that are not solutions.
    """
    a_idx, b_idx = others(i)
    a, b = t[a_idx - 1], t[b_idx - 1]
    num = a * a + lam.coef(i) * a * b + b * b
    q, r = divmod(num, t[i - 1])
    if r:
        raise NonIntegerResult(f"mutation {i} of {tuple(t)} is {num}/{t[i - 1]}, not an integer")
    out = list(t)
    out[i - 1] = q
    return tuple(out)


def mutate_rational(t, i: int, lam: LambdaParams):
    """The same rule over exact rationals, for inputs that are not solutions."""
    from fractions import Fraction

    a_idx, b_idx = others(i)
    a, b = Fraction(t[a_idx - 1]), Fraction(t[b_idx - 1])
    out = list(map(Fraction, t))
    out[i - 1] = (a * a + lam.coef(i) * a * b + b * b) / out[i - 1]
    return tuple(out)


@dataclass(frozen=True)
class MarkovChain:
    lam: LambdaParams
    seq: ReducedSeq
    triples: Tuple[Triple, ...]

    @property
    def final(self) -> Triple:
        return self.triples[-1]


class _DigitGuard:
    """Cheap "more than ``budget`` digits" test via a cached power of ten."""

    _cache: dict = {}

    def __init__(self, budget: int):
        if budget < 1:
            raise ValueError("digit budget must be positive")
        self.budget = budget
        # bit_length pre-filter keeps the big comparison rare
        self.safe_bits = int(budget * 3.3219280948873626) - 1

    def exceeded(self, value: int) -> bool:
        if value.bit_length() <= self.safe_bits:
            return False
        limit = self._cache.get(self.budget)
        if limit is None:
            limit = self._cache[self.budget] = 10 ** self.budget
        return value >= limit


def chain(
    w: Sequence[int],
    lam: LambdaParams,
    start: Triple = (1, 1, 1),
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> MarkovChain:
    w = ReducedSeq(w)
    start = tuple(start)
    if not is_solution(start, lam):
        raise NotASolution(f"{start} does not solve the equation for lambda={lam}")
    guard = _DigitGuard(digit_budget)
    triples = [start]
    t = start
    for depth, i in enumerate(w, start=1):
        t = mutate(t, i, lam)
        if guard.exceeded(t[i - 1]):
            raise DigitBudgetExceeded(depth - 1, digit_budget)
        triples.append(t)
    return MarkovChain(lam, w, tuple(triples))


def singular_solutions(lam: LambdaParams) -> set:
    return {
        (1, 1, 1),
        (lam.l1 + 2, 1, 1),
        (1, lam.l2 + 2, 1),
        (1, 1, lam.l3 + 2),
    }


def is_singular(t: Sequence[int], lam: LambdaParams) -> bool:
    t = tuple(t)
    if not is_solution(t, lam):
        raise NotASolution(f"{t} does not solve the equation for lambda={lam}")
    return t in singular_solutions(lam)


def argmax_index(t: Sequence) -> "int | str":
    """1-based index of the strict maximum, or TIE."""
    top = max(t)
    where = [p for p, v in enumerate(t, start=1) if v == top]
    return where[0] if len(where) == 1 else TIE


def second_index(t: Sequence) -> Optional[int]:
    """1-based index of the middle value when all three entries differ."""
    if len(set(t)) != 3:
        return None
    return sorted(range(3), key=lambda p: t[p])[1] + 1


def _children(t: Triple, addr: tuple, lam: LambdaParams, bound: int):
    out = []
    for i in (1, 2, 3):
        if addr and addr[-1] == i:
            continue
        c = mutate(t, i, lam)
        if c[i - 1] <= bound:
            out.append((c, addr + (i,)))
    return out


def _address_key(addr: tuple):
    return (len(addr), addr)


def enumerate_tree(lam: LambdaParams, bound: int, threads: int = 1) -> List[Tuple[ReducedSeq, Triple]]:
    """All solutions reachable from (1,1,1) with max component <= bound.

    Each comes with its shortest mutation address; sorted by (max, triple).
    With ``threads > 1`` each BFS level is expanded in a process pool; the
    merge is order independent so the result is identical.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    found = {(1, 1, 1): ()}
    frontier = [((1, 1, 1), ())]
    pool = None
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(max_workers=threads)
    try:
        while frontier:
            if pool is not None and len(frontier) >= PARALLEL_MIN_FRONTIER:
                chunks = [frontier[p::threads] for p in range(threads)]
                results = pool.map(_expand_chunk, chunks, [lam] * threads, [bound] * threads)
                kids = [c for part in results for c in part]
            else:
                kids = _expand_chunk(frontier, lam, bound)
            nxt = []
            for c, addr in sorted(kids, key=lambda ca: _address_key(ca[1])):
                prev = found.get(c)
                if prev is None:
                    found[c] = addr
                    nxt.append((c, addr))
                elif _address_key(addr) < _address_key(prev):
                    found[c] = addr
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    rows = sorted(found.items(), key=lambda ta: (max(ta[0]), ta[0]))
    return [(ReducedSeq(addr), t) for t, addr in rows]


def _expand_chunk(chunk, lam, bound):
    out = []
    for t, addr in chunk:
        out.extend(_children(t, addr, lam, bound))
    return out


def record(lam: LambdaParams, seq: Sequence[int], t: Sequence[int]) -> dict:
    return {
        "lambda": list(lam.as_tuple()),
        "seq": str(ReducedSeq(seq)),
        "triple": [str(v) for v in t],
        "max": str(max(t)),
    }


def record_line(lam: LambdaParams, seq: Sequence[int], t: Sequence[int]) -> str:
    return json.dumps(record(lam, seq, t), separators=(",", ":"))


def parse_record(line: str) -> Tuple[LambdaParams, ReducedSeq, Triple]:
    obj = json.loads(line)
    return (
        LambdaParams(*obj["lambda"]),
        ReducedSeq.parse(obj["seq"]),
        tuple(int(v) for v in obj["triple"]),
    )
