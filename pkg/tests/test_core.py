import pytest
from hypothesis import given, strategies as st

from gmark.core import (
    BadAlphabet,
    BadDirection,
    CapExceeded,
    LambdaParams,
    NotReduced,
    ReducedSeq,
    WindowTooLarge,
    classify_tail,
    count_reduced,
    cyclic_extension,
    enumerate_reduced,
    is_three_cyclic,
    others,
    validate_reduced,
)

reduced_words = st.lists(st.integers(1, 3), max_size=30).map(
    lambda xs: [x for p, x in enumerate(xs) if p == 0 or xs[p - 1] != x]
).filter(lambda xs: all(a != b for a, b in zip(xs, xs[1:])))


def test_validate_examples():
    assert validate_reduced([1, 2, 1]) == (1, 2, 1)
    with pytest.raises(NotReduced):
        validate_reduced([1, 1, 2])
    assert len(validate_reduced([])) == 0
    with pytest.raises(BadAlphabet):
        validate_reduced([1, 4])
    with pytest.raises(BadAlphabet):
        validate_reduced([0])


def test_text_form_round_trip():
    w = ReducedSeq.parse("1,2,3,1")
    assert str(w) == "1,2,3,1"
    assert ReducedSeq.parse(str(w)) == w
    assert ReducedSeq.parse("") == ReducedSeq()
    assert repr(w) == "ReducedSeq(1,2,3,1)"


def test_lambda_params():
    lam = LambdaParams.parse("0,2,2")
    assert lam.k_lambda == 7
    assert lam.coef(2) == 2 and lam.coef(1) == 0
    assert str(lam) == "0,2,2"
    with pytest.raises(ValueError):
        LambdaParams(-1, 0, 0)
    with pytest.raises(ValueError):
        LambdaParams.parse("1,2")


def test_others():
    assert others(1) == (2, 3) and others(2) == (1, 3) and others(3) == (1, 2)
    with pytest.raises(BadDirection):
        others(0)


@pytest.mark.parametrize("n,count", [(0, 1), (1, 3), (6, 96)])
def test_enumerate_counts(n, count):
    words = enumerate_reduced(n)
    assert len(words) == count == count_reduced(n)


def test_enumerate_order_and_cap():
    assert enumerate_reduced(1) == [(1,), (2,), (3,)]
    assert enumerate_reduced(2)[:3] == [(1, 2), (1, 3), (2, 1)]
    words = enumerate_reduced(8)
    assert words == sorted(words)
    with pytest.raises(CapExceeded):
        enumerate_reduced(25)
    assert len(enumerate_reduced(3, cap=3)) == 12


@pytest.mark.parametrize("n", range(1, 11))
def test_enumerate_count_and_prefix_closure(n):
    words = enumerate_reduced(n)
    assert len(words) == 3 * 2 ** (n - 1)
    assert len(set(words)) == len(words)
    shorter = set(enumerate_reduced(n - 1))
    for w in words:
        validate_reduced(w)
        assert w[:-1] in shorter


def test_classify_examples():
    t = classify_tail([1, 2, 3, 1, 2, 3], 6)
    assert t.all_three and t.three_cyclic
    assert classify_tail([3, 1, 2, 1, 2, 1], 4).missing == 3
    assert classify_tail([1, 2], 2).missing == 3
    with pytest.raises(WindowTooLarge):
        classify_tail([1, 2], 3)
    with pytest.raises(ValueError):
        classify_tail([1, 2, 1], 1)
    t = classify_tail([1, 2, 1, 3], 4)
    assert t.all_three and not t.three_cyclic


@given(reduced_words.filter(lambda w: len(w) >= 2), st.permutations([1, 2, 3]), st.integers(2, 30))
def test_classify_relabeling(w, perm, window):
    window = min(window, len(w))
    relabel = {1: perm[0], 2: perm[1], 3: perm[2]}
    a = classify_tail(w, window)
    b = classify_tail([relabel[x] for x in w], window)
    assert a.three_cyclic == b.three_cyclic
    if a.missing is None:
        assert b.missing is None
    else:
        assert b.missing == relabel[a.missing]


def test_three_cyclic():
    assert is_three_cyclic([2, 1, 3, 2, 1])
    assert not is_three_cyclic([1, 2, 1])
    assert not is_three_cyclic([1, 2])


def test_cyclic_extension():
    assert cyclic_extension([1, 2, 3], 7) == (1, 2, 3, 1, 2, 3, 1)
    # the wrap 1,2,1 | 1,2,1 would repeat the 1
    assert cyclic_extension([1, 2, 1], 6) == (1, 2, 1, 2, 1, 2)
    assert cyclic_extension([2], 4) == (2, 3, 1, 2)
    with pytest.raises(ValueError):
        cyclic_extension([], 3)


@given(reduced_words.filter(bool), st.integers(1, 60))
def test_cyclic_extension_is_reduced_and_extends(prefix, length):
    w = cyclic_extension(prefix, length)
    assert len(w) == length
    if len(prefix) > 1:
        assert w[: min(length, len(prefix))] == tuple(prefix[:length])
