"""Shared value types and mutation-word combinatorics.

Triples are plain tuples: ``tuple[int, int, int]`` for solutions of the
generalized Markov equation, ``tuple[Fraction, ...]`` for Euclid triples and
``tuple[float, ...]`` for log-domain triples.  Directions are 1-based
throughout (1, 2, 3), and index 0 of a mutation word is applied first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence, Tuple

Triple = Tuple[int, int, int]
RatTriple = Tuple[Fraction, Fraction, Fraction]
LogTriple = Tuple[float, float, float]

DEFAULT_ENUM_CAP = 24


class NotReduced(ValueError):
    pass


class BadAlphabet(ValueError):
    pass


class CapExceeded(ValueError):
    pass


class WindowTooLarge(ValueError):
    pass


class BadDirection(ValueError):
    pass


def others(i: int) -> Tuple[int, int]:
    """The two directions different from ``i``, in increasing order."""
    if i not in (1, 2, 3):
        raise BadDirection(f"direction must be 1, 2 or 3, got {i!r}")
    return {1: (2, 3), 2: (1, 3), 3: (1, 2)}[i]


@dataclass(frozen=True)
class LambdaParams:
    """Coefficients (l1, l2, l3) of the generalized Markov equation."""

    l1: int = 0
    l2: int = 0
    l3: int = 0

    def __post_init__(self):
        for v in (self.l1, self.l2, self.l3):
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"lambda entries must be nonnegative integers, got {v!r}")

    @property
    def k_lambda(self) -> int:
        return 3 + self.l1 + self.l2 + self.l3

    def coef(self, i: int) -> int:
        """Middle coefficient of the exchange polynomial used by mutation ``i``."""
        return (self.l1, self.l2, self.l3)[i - 1]

    def as_tuple(self) -> Triple:
        return (self.l1, self.l2, self.l3)

    @classmethod
    def parse(cls, text: str) -> "LambdaParams":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated integers, got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self):
        return f"{self.l1},{self.l2},{self.l3}"


class ReducedSeq(tuple):
    """A word over {1, 2, 3} with no two equal adjacent letters.

    >>> ReducedSeq([1, 2, 1])
    ReducedSeq(1,2,1)
    >>> str(ReducedSeq.parse("2,3,2,1"))
    '2,3,2,1'
    """

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for e in entries:
            if e not in (1, 2, 3) or isinstance(e, bool):
                raise BadAlphabet(f"entry {e!r} is not in {{1,2,3}}")
        for pos in range(len(entries) - 1):
            if entries[pos] == entries[pos + 1]:
                raise NotReduced(f"entries {pos} and {pos + 1} are both {entries[pos]}")
        return super().__new__(cls, entries)

    @classmethod
    def parse(cls, text: str) -> "ReducedSeq":
        text = text.strip()
        if not text:
            return cls()
        return cls(int(p) for p in text.split(","))

    def extend(self, i: int) -> "ReducedSeq":
        return ReducedSeq(self + (i,))

    def __str__(self):
        return ",".join(str(e) for e in self)

    def __repr__(self):
        return f"ReducedSeq({self})"


def validate_reduced(entries: Sequence[int]) -> ReducedSeq:
    return ReducedSeq(entries)


def enumerate_reduced(n: int, cap: int = DEFAULT_ENUM_CAP) -> list:
    """All reduced words of length ``n`` in lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    words = [()]
    for _ in range(n):
        words = [w + (d,) for w in words for d in (1, 2, 3) if not w or w[-1] != d]
    return [ReducedSeq(w) for w in words]


def count_reduced(n: int) -> int:
    return 1 if n == 0 else 3 * 2 ** (n - 1)


@dataclass(frozen=True)
class TailClass:
    """Which tail behaviour a finite window of a word supports.

    ``missing`` is the direction absent from the window (two-alternating
    tails) or None when all three directions occur.
    """

    missing: Optional[int]
    three_cyclic: bool

    @property
    def all_three(self) -> bool:
        return self.missing is None

    def __str__(self):
        if self.missing is None:
            return "all-three" + ("+3-cyclic" if self.three_cyclic else "")
        return f"two-alternating({self.missing})"


def is_three_cyclic(window: Sequence[int]) -> bool:
    if len(window) < 3:
        return False
    return all(len(set(window[p:p + 3])) == 3 for p in range(len(window) - 2))


def classify_tail(w: Sequence[int], window: int) -> TailClass:
    if window < 2:
        raise ValueError("window must be at least 2")
    if window > len(w):
        raise WindowTooLarge(f"window {window} exceeds word length {len(w)}")
    tail = tuple(w[len(w) - window:])
    absent = {1, 2, 3} - set(tail)
    missing = min(absent) if absent else None
    return TailClass(missing, is_three_cyclic(tail))


def cyclic_extension(prefix: Sequence[int], length: int) -> ReducedSeq:
    """Repeat ``prefix`` cyclically up to ``length`` letters, skipping any
    letter equal to the previous one so the result stays reduced.

    A one-letter prefix ``[d]`` has no reduced periodic extension; it is
    continued as the 3-cyclic word d, d+1, d+2, ... (mod 3).
    """
    prefix = ReducedSeq(prefix)
    if not prefix:
        raise ValueError("cannot extend an empty prefix")
    if len(prefix) == 1:
        d = prefix[0]
        prefix = ReducedSeq((d, d % 3 + 1, (d + 1) % 3 + 1))
    out = []
    pos = 0
    while len(out) < length:
        d = prefix[pos % len(prefix)]
        pos += 1
        if out and out[-1] == d:
            continue
        out.append(d)
    return ReducedSeq(out)


def all_lambdas(max_entry: int) -> list:
    return [LambdaParams(*t) for t in product(range(max_entry + 1), repeat=3)]
