import pytest

from dehnlab.certificates import Certificate, Factor
from dehnlab.diagrams import boundary_word, counts, fold, from_certificate, is_one_regular
from dehnlab.grigorchuk import decompose, decompose_R
from dehnlab.presentations import Explicit, Presentation, builtin
from dehnlab.words import free_reduce
from laws import law_violations

LYS = builtin("lysenok")


def test_empty_certificate():
    d = from_certificate(Certificate("", LYS, ()))
    assert counts(d).as_tuple() == (1, 0, 0)
    assert boundary_word(d) == ""


def test_single_faces():
    assert fold(from_certificate(Certificate("aa", LYS, (Factor("", "aa", 1),)))).counts().as_tuple() == (2, 2, 1)
    w = "ad" * 4
    assert fold(from_certificate(Certificate(w, LYS, (Factor("", w, 1),)))).counts().as_tuple() == (8, 8, 1)


def test_lollipop_before_folding():
    c = Certificate("abcdA", LYS, (Factor("a", "bcd", 1),))
    d = from_certificate(c)
    assert d.counts().as_tuple() == (4, 4, 1)
    d.check()
    f = fold(d)
    f.check()
    assert free_reduce(f.boundary_word()) == "abcdA"


def test_fold_reduces_edges():
    c = decompose_R("acaaca")
    d = from_certificate(c)
    f = fold(d)
    assert f.counts().e <= d.counts().e
    assert f.counts().euler == 1
    assert is_one_regular(f)


def test_folding_cancels_inverse_faces():
    p = Presentation(("a", "b"), Explicit(("abAB",)))
    c = Certificate("", p, (Factor("", "abAB", 1), Factor("", "abAB", -1)))
    f = fold(from_certificate(c))
    assert f.counts().euler == 1
    assert free_reduce(f.boundary_word()) == ""


@pytest.mark.parametrize("w", ["bcd", "dcb", "ad" * 4 + "bb", "acab" * 8, "abac" * 16])
def test_laws_on_grigorchuk_certificates(w):
    for c in (decompose(w), decompose_R(w)):
        assert law_violations(c) == []
