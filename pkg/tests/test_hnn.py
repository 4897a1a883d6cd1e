import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dehnlab.certificates import product, verify
from dehnlab.grigorchuk import NotTrivial, is_trivial_gamma
from dehnlab.hnn import (
    NonzeroTExponent,
    decompose_gamma_t,
    is_trivial_gamma_t,
    random_trivial_word,
    t_eliminate,
    t_eliminate_trace,
)
from dehnlab.words import exponent_sum, free_reduce, invert, occurrences, sigma

tfree = st.text(alphabet="abcdABCD", max_size=6)


def test_examples():
    assert t_eliminate("tbT") == ("d", 1)
    assert t_eliminate("abc") == ("abc", 0)
    assert is_trivial_gamma_t("tbTD")
    assert not is_trivial_gamma_t("t")
    with pytest.raises(NonzeroTExponent):
        t_eliminate("tb")


def test_nested_pairs():
    u, steps = t_eliminate("ttbTT")
    assert u == sigma(sigma("b"))
    assert steps == 2


@given(tfree, tfree, tfree)
def test_elimination_identity(x, y, z):
    # the trace factors and conjugator reproduce w in the free group
    w = free_reduce(x + "t" + y + "T" + z)
    tr = t_eliminate_trace(w)
    lhs = free_reduce(product(tr.factors) + tr.conjugator + tr.u + invert(tr.conjugator))
    assert lhs == w
    assert "t" not in tr.u.lower()
    assert 2 * tr.pairs == occurrences(w, "t")


@given(tfree, tfree)
def test_triviality_is_preserved(x, y):
    w = free_reduce("t" + x + "T" + y)
    assert is_trivial_gamma_t(w) == is_trivial_gamma(free_reduce(sigma(x) + y))


def test_rotation_case():
    # every t^-1 before every t: the word is handled up to conjugation
    w = "TbtD" + "c"
    tr = t_eliminate_trace(free_reduce(w))
    assert free_reduce(product(tr.factors) + tr.conjugator + tr.u + invert(tr.conjugator)) == free_reduce(w)


def test_a_count_at_most_doubles():
    rng = random.Random(11)
    for _ in range(100):
        w = random_trivial_word(rng, 14)
        tr = t_eliminate_trace(w)
        counts = [occurrences(free_reduce(w), "a")] + tr.a_counts
        assert all(b <= 2 * a for a, b in zip(counts, counts[1:]))


def test_decompose_gamma_t():
    rng = random.Random(3)
    for _ in range(50):
        w = random_trivial_word(rng, 14)
        assert exponent_sum(w, "t") == 0
        assert verify(decompose_gamma_t(w))
    with pytest.raises(NotTrivial):
        decompose_gamma_t("tbT")
