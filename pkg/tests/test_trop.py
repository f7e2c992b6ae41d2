import math
import random
from itertools import product

import pytest

from gmark import markov
from gmark.core import LambdaParams
from gmark.euclid import euclid_mutate
from gmark.trop import (
    NoStrictArgmax,
    is_trop_solution,
    seed_from_markov,
    trop_limit_check,
    trop_mutate,
    verify_correspondence,
)

L0 = LambdaParams()


def test_predicate_examples():
    assert is_trop_solution((4, 2, 2))
    assert is_trop_solution((0, 0, 0))
    assert not is_trop_solution((1, 1, 1))


def test_mutation_examples():
    assert trop_mutate((4, 2, 2), 2) == (4, 6, 2)
    assert trop_mutate((4, 6, 2), 3) == (4, 6, 10)
    assert trop_mutate((4, 6, 10), 1) == (16, 6, 10)


def test_involution_exhaustive():
    r = range(-50, 51)
    for t in product(r, r, r):
        for i in (1, 2, 3):
            assert trop_mutate(trop_mutate(t, i), i) == t


def test_non_argmax_mutation_is_euclid_and_stays_admissible():
    r = range(-30, 31)
    for t in product(r, r, r):
        if not is_trop_solution(t):
            continue
        top = max(t)
        for i in (1, 2, 3):
            if t[i - 1] == top:
                continue
            c = trop_mutate(t, i)
            assert c == euclid_mutate(t, i)
            assert is_trop_solution(c)


def test_preserved_off_the_strict_argmax():
    r = range(-30, 31)
    for t in product(r, r, r):
        if not is_trop_solution(t):
            continue
        top = markov.argmax_index(t)
        for i in (1, 2, 3):
            if i != top:
                assert is_trop_solution(trop_mutate(t, i))


def test_seed_examples():
    assert seed_from_markov((2, 1, 1)) == (4, 2, 2)
    assert seed_from_markov((1, 1, 1)) == (0, 0, 0)
    s = seed_from_markov((2, 5, 29))
    assert is_trop_solution(s) and markov.argmax_index(s) == 3
    assert s == (1, 2, 3)
    assert seed_from_markov((29, 5, 2), a=3, b=2) == (5, 3, 2)
    with pytest.raises(NoStrictArgmax):
        seed_from_markov((5, 5, 1))
    with pytest.raises(NoStrictArgmax):
        seed_from_markov((2, 2, 2))
    with pytest.raises(ValueError):
        seed_from_markov((2, 1, 1), a=1, b=1)


def test_seed_keeps_order_pattern():
    for _, t in markov.enumerate_tree(LambdaParams(0, 2, 2), 10**5):
        if t == (1, 1, 1):
            continue
        s = seed_from_markov(t)
        assert is_trop_solution(s)
        assert markov.argmax_index(s) == markov.argmax_index(t)
        assert markov.second_index(s) == markov.second_index(t)


def test_example_chains():
    rep = verify_correspondence([2, 3, 1], L0, (2, 1, 1))
    assert rep.ok
    assert rep.trop == [(4, 2, 2), (4, 6, 2), (4, 6, 10), (16, 6, 10)]
    assert rep.markov == [(2, 1, 1), (2, 5, 1), (2, 5, 29), (433, 5, 29)]
    assert verify_correspondence([2, 1], LambdaParams(0, 2, 2), (2, 1, 1)).ok
    rep = verify_correspondence([], LambdaParams(1, 2, 3))
    assert rep.ok and rep.seed_depth is None


def test_backward_step_is_reported():
    # mutating the maximum walks back up the tree; not a Euclid step
    rep = verify_correspondence([1], L0, (2, 1, 1))
    assert not rep.ok and rep.divergence == 1


def test_random_correspondence(rng_seed):
    rng = random.Random(rng_seed)
    for _ in range(200):
        lam = LambdaParams(*(rng.randint(0, 3) for _ in range(3)))
        w = []
        while len(w) < rng.randint(0, 12):
            d = rng.randint(1, 3)
            if not w or w[-1] != d:
                w.append(d)
        assert verify_correspondence(w, lam).ok


def test_limit_examples():
    num, exact = trop_limit_check((4, 2, 2), L0, 1000)
    assert exact == 0 and abs(num - exact) < 1e-2
    lam = LambdaParams(1, 2, 3)
    num, exact = trop_limit_check((0, 0, 0), lam, 100)
    assert exact == 0
    # six monomials, all equal to one, weighted 1,1,1,l3,l1,l2
    assert num == pytest.approx(math.log(lam.k_lambda) / 100, rel=1e-12)
    num, exact = trop_limit_check((1, 0, 0), L0, 1e4)
    assert exact == 1 and abs(num - 1) < 1e-3
    with pytest.raises(ValueError):
        trop_limit_check((0, 0, 0), L0, 0)


def test_limit_rate():
    rng = random.Random(5)
    for _ in range(50):
        x = tuple(rng.randint(-5, 5) for _ in range(3))
        lam = LambdaParams(*(rng.randint(0, 3) for _ in range(3)))
        for C in (1.0, 10.0, 1e3):
            n1, e = trop_limit_check(x, lam, C)
            n2, _ = trop_limit_check(x, lam, 2 * C)
            assert n1 >= e and n2 >= e
            assert abs(n2 - e) <= abs(n1 - e) / 2 + 1e-12
