"""Uniqueness scans, q-tables and the approximate counterexample search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from . import markov
from .core import CapExceeded, LambdaParams, ReducedSeq, cyclic_extension, enumerate_reduced
from .dynamics import DEFAULT_EPS, NoConvergence, estimate_q_log
from .euclid import euclid_mutate

Q_TABLE_CAP = 12
PATTERNS = tuple("".join(map(str, p)) for p in permutations((1, 2, 3)))


@dataclass
class Violation:
    a: int
    pair1: Tuple[int, int]
    pair2: Tuple[int, int]
    addr1: ReducedSeq
    addr2: ReducedSeq
    pattern: str = "sorted"

    def as_dict(self) -> dict:
        return {
            "a": str(self.a),
            "pair1": [str(v) for v in self.pair1],
            "pair2": [str(v) for v in self.pair2],
            "addr1": str(self.addr1),
            "addr2": str(self.addr2),
            "pattern": self.pattern,
        }


@dataclass
class ScanReport:
    """``groups`` maps (pattern, a) to the distinct (b, c) tails seen.

    In sorted mode the pattern is always "sorted".  In positional mode a
    pattern such as "213" means the triple was read as (x2, x1, x3) and
    kept when x2 >= x1 >= x3.
    """

    lam: LambdaParams
    bound: int
    solutions: int
    mode: str
    groups: Dict[Tuple[str, int], List[Tuple[int, int]]] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "lambda": list(self.lam.as_tuple()),
            "bound": str(self.bound),
            "mode": self.mode,
            "solutions": self.solutions,
            "violations": [v.as_dict() for v in self.violations],
        }


def _views(t, mode: str):
    if mode == "sorted":
        yield "sorted", tuple(sorted(t, reverse=True))
        return
    for pat in PATTERNS:
        v = tuple(t[int(c) - 1] for c in pat)
        if v[0] >= v[1] >= v[2]:
            yield pat, v


def uniqueness_scan(
    lam: LambdaParams,
    bound: int,
    mode: str = "sorted",
    threads: int = 1,
) -> ScanReport:
    """Look for two solutions with the same largest entry but different tails.

    ``positional`` keeps each variable in its own slot: for every ordering
    pattern it compares solutions whose entries decrease in that pattern.
    ``sorted`` forgets positions and compares descending sorts, which is a
    stronger statement when lambda is not symmetric.
    """
    if mode not in ("positional", "sorted"):
        raise ValueError(f"mode must be positional or sorted, got {mode!r}")
    rows = markov.enumerate_tree(lam, bound, threads=threads)
    groups: Dict[Tuple[str, int], List[Tuple[int, int]]] = {}
    first_addr: Dict[Tuple[str, int, Tuple[int, int]], ReducedSeq] = {}
    for addr, t in rows:
        for pat, (a, b, c) in _views(t, mode):
            key = (pat, a)
            tails = groups.setdefault(key, [])
            if (b, c) not in tails:
                tails.append((b, c))
                first_addr[(pat, a, (b, c))] = addr
    violations = []
    for (pat, a), tails in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for other in tails[1:]:
            violations.append(
                Violation(
                    a, tails[0], other,
                    first_addr[(pat, a, tails[0])], first_addr[(pat, a, other)], pat,
                )
            )
    return ScanReport(lam, bound, len(rows), mode, groups, violations)


@dataclass
class QRow:
    q: float
    spread: float
    depth: int
    converged: bool
    cls: int = -1


@dataclass
class QTable:
    n: int
    lam: LambdaParams
    rows: Dict[ReducedSeq, QRow]
    classes: List[float]

    def csv_rows(self):
        yield ("seq", "q", "spread", "depth")
        for seq, row in self.rows.items():
            yield (str(seq), f"{row.q:.15g}", f"{row.spread:.3g}", str(row.depth))


def _q_row(prefix: ReducedSeq, lam: LambdaParams, eps: float, max_depth: int) -> QRow:
    w = cyclic_extension(prefix, max_depth)
    try:
        est = estimate_q_log(w, lam, eps=eps, max_depth=max_depth)
        ok = True
    except NoConvergence as exc:
        est, ok = exc.partial, False
    return QRow(est.q, est.spread, est.depth, ok)


def q_table(
    n: int,
    lam: LambdaParams,
    eps: float = 1e-9,
    max_depth: int = 400,
    class_tol: float = 1e-6,
    threads: int = 1,
) -> QTable:
    """q estimates for every length-n prefix, each extended periodically.

    Rows whose q agree within ``class_tol`` share an equivalence class;
    ``classes`` lists one representative per class in increasing order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > Q_TABLE_CAP:
        raise CapExceeded(f"n={n} exceeds the q-table cap {Q_TABLE_CAP}")
    prefixes = enumerate_reduced(n)
    args = [(p, lam, eps, max_depth) for p in prefixes]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_q_row, *zip(*args)))
    else:
        results = [_q_row(*a) for a in args]
    rows = dict(zip(prefixes, results))
    classes: List[float] = []
    for q in sorted(r.q for r in results):
        if not classes or q - classes[-1] > class_tol:
            classes.append(q)
    for r in results:
        r.cls = min(range(len(classes)), key=lambda c: abs(classes[c] - r.q))
    return QTable(n, lam, rows, classes)


@dataclass(frozen=True)
class Candidate:
    seq: ReducedSeq
    triple: Tuple[int, int, int]
    matched: bool
    euclid: Tuple[int, int, int]


def euclid_hits(target: float, tol: float) -> List[Tuple[ReducedSeq, Tuple[int, int, int]]]:
    """Addresses in the classical Euclid tree where some entry is within
    tol*target of target.

    Branches stop once the newly created entry exceeds (1+tol)*target;
    entries only grow going down, and every entry of a deeper triple
    already appeared at its creation point.
    """
    lo, hi = target * (1 - tol), target * (1 + tol)
    hits = []
    stack = [((), (1, 1, 1))]
    while stack:
        addr, t = stack.pop()
        if any(lo <= v <= hi for v in t):
            hits.append((ReducedSeq(addr), t))
        for i in (3, 2, 1):
            if addr and addr[-1] == i:
                continue
            c = euclid_mutate(t, i)
            if c[i - 1] <= hi:
                stack.append((addr + (i,), c))
    return hits


def candidate_search(
    a: int,
    lam: LambdaParams,
    n: int = 6,
    tol: float = 0.05,
    table: Optional[QTable] = None,
) -> List[Candidate]:
    """Guess addresses for a Markov-type number ``a`` from log(a) ~ q * x.

    Each q class of the length-n table gives a target log(a)/q; Euclid
    triples near the target are replayed exactly and marked matched when
    ``a`` is one of the resulting entries.
    """
    if a < 2:
        raise ValueError("a must be >= 2")
    if table is None:
        table = q_table(n, lam)
    seen: Dict[ReducedSeq, Candidate] = {}
    for q in table.classes:
        if q <= 0:
            continue
        target = math.log(a) / q
        for addr, et in euclid_hits(target, tol):
            if addr in seen:
                continue
            mt = markov.chain(addr, lam).final
            seen[addr] = Candidate(addr, mt, a in mt, et)
    return sorted(seen.values(), key=lambda c: (not c.matched, len(c.seq), tuple(c.seq)))
