"""Generalized cluster seeds with numeric (exact rational) clusters.

Matrices are tuples of row tuples, directions are 1-based.  The matrix
mutation rule is

    b'_ij = -b_ij                                   if i == k or j == k
    b'_ij = b_ij + r_k ([b_ik]_+ b_kj + b_ik [-b_kj]_+)   otherwise

and reduces to ordinary Fomin-Zelevinsky mutation when r_k = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional, Sequence, Tuple

from .core import BadDirection, LambdaParams

Matrix = Tuple[Tuple[int, ...], ...]

MAX_RANK = 16


def _pos(a: int) -> int:
    return a if a > 0 else 0


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("exchange matrix must be square")
    if n > MAX_RANK:
        raise ValueError(f"rank {n} exceeds the cap {MAX_RANK}")
    return m


def _check_direction(k: int, n: int):
    if not 1 <= k <= n:
        raise BadDirection(f"direction {k} outside 1..{n}")


def mutate_matrix(B: Sequence[Sequence[int]], R: Sequence[int], k: int) -> Matrix:
    B = as_matrix(B)
    n = len(B)
    _check_direction(k, n)
    c = k - 1
    rk = R[c]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == c or j == c:
                row.append(-B[i][j])
            else:
                row.append(B[i][j] + rk * (_pos(B[i][c]) * B[c][j] + B[i][c] * _pos(-B[c][j])))
        out.append(tuple(row))
    return tuple(out)


def mutate_poly(coeffs: Sequence[int], k_is_target: bool) -> Tuple[int, ...]:
    """u^r Z(1/u) is coefficient reversal."""
    coeffs = tuple(coeffs)
    return coeffs[::-1] if k_is_target else coeffs


def matmul_diag(B: Matrix, R: Sequence[int]) -> Matrix:
    """B @ diag(R): column j scaled by R[j]."""
    return tuple(tuple(b * R[j] for j, b in enumerate(row)) for row in B)


def check_compatibility(B: Sequence[Sequence[int]], R: Sequence[int], k: int) -> bool:
    """mu_k(B) R == mu*_k(B R), with mu* the ordinary (r_k = 1) mutation."""
    B = as_matrix(B)
    lhs = matmul_diag(mutate_matrix(B, R, k), R)
    rhs = mutate_matrix(matmul_diag(B, R), [1] * len(B), k)
    return lhs == rhs


def is_skew_symmetrizable(B: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    """Least positive integer diagonal D with D B skew-symmetric, or None.

    Ratios d_j / d_i = -b_ij / b_ji are propagated over each connected
    component of the nonzero pattern; every component is scaled separately
    to coprime integers.
    """
    B = as_matrix(B)
    n = len(B)
    for i in range(n):
        if B[i][i] != 0:
            return None
        for j in range(i + 1, n):
            if (B[i][j] == 0) != (B[j][i] == 0):
                return None
            if B[i][j] * B[j][i] > 0:
                return None
    d: list = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        comp = [root]
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                want = d[i] * Fraction(-B[i][j], B[j][i])
                if d[j] is None:
                    d[j] = want
                    comp.append(j)
                    stack.append(j)
                elif d[j] != want:
                    return None
        den = reduce(lcm, (d[i].denominator for i in comp), 1)
        ints = [int(d[i] * den) for i in comp]
        g = reduce(gcd, ints)
        for i, v in zip(comp, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class GenSeed:
    """Exchange matrix, exchange polynomials, degrees and a numeric cluster."""

    B: Matrix
    Z: Tuple[Tuple[int, ...], ...]
    R: Tuple[int, ...]
    x: Tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.B)
        if not (len(self.Z) == len(self.R) == len(self.x) == n):
            raise ValueError("B, Z, R and x must all have the seed rank")
        for z, r in zip(self.Z, self.R):
            if len(z) != r + 1:
                raise ValueError(f"exchange polynomial {z} does not have degree {r}")
            if z[0] != 1 or z[-1] != 1 or min(z) < 0:
                raise ValueError(f"exchange polynomial {z} must be monic at both ends with coefficients >= 0")
        if any(v <= 0 for v in self.x):
            raise ValueError("cluster entries must be positive")

    @classmethod
    def make(cls, B, Z, R, x) -> "GenSeed":
        return cls(as_matrix(B), tuple(tuple(z) for z in Z), tuple(R), tuple(Fraction(v) for v in x))

    @property
    def rank(self) -> int:
        return len(self.B)


def _eval_poly(coeffs: Sequence[int], u: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def mutate_seed(s: GenSeed, k: int) -> GenSeed:
    n = s.rank
    _check_direction(k, n)
    c = k - 1
    col = [s.B[i][c] for i in range(n)]
    neg = Fraction(1)
    arg = Fraction(1)
    for i in range(n):
        neg *= s.x[i] ** _pos(-col[i])
        arg *= s.x[i] ** col[i]
    new_xk = neg ** s.R[c] * _eval_poly(s.Z[c], arg) / s.x[c]
    x = list(s.x)
    x[c] = new_xk
    Z = tuple(mutate_poly(z, i == c) for i, z in enumerate(s.Z))
    return GenSeed(mutate_matrix(s.B, s.R, k), Z, s.R, tuple(x))


def b2_seed(x=(1, 1)) -> GenSeed:
    """The rank-2 seed with Z_1 = 1 + u + u^2, Z_2 = 1 + u."""
    return GenSeed.make([[0, -1], [1, 0]], [(1, 1, 1), (1, 1)], (2, 1), x)


MARKOV_B = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))


def markov_seed(lam: LambdaParams, x=(1, 1, 1)) -> GenSeed:
    Z = [(1, lam.coef(i), 1) for i in (1, 2, 3)]
    return GenSeed.make(MARKOV_B, Z, (2, 2, 2), x)


def orbit(s: GenSeed, directions: Sequence[int]) -> list:
    """Clusters visited by applying ``directions`` in order, start included."""
    clusters = [s.x]
    for k in directions:
        s = mutate_seed(s, k)
        clusters.append(s.x)
    return clusters
