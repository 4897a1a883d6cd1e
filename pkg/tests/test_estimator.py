import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dehnlab.certificates import verify
from dehnlab.estimator import (
    InsufficientData,
    NoCertWithin,
    SweepRow,
    dehn_sweep,
    growth_fit,
    l0_upper,
    l1_upper,
    l2_exact,
    l2_search,
)
from dehnlab.presentations import Explicit, JockuschKapovich, Presentation, builtin
from laws import law_violations

EX21 = builtin("ex21")
EX23 = builtin("ex23")


def test_relator_has_area_one():
    assert l2_exact(EX21, "abAB") == 1
    assert l2_exact(EX21, "") == 0


def test_b_powers():
    for k in (1, 2, 5):
        assert l2_exact(EX23, "b" * k) == 2
    p = Presentation(("a", "b"), JockuschKapovich((1, 2, 5)))
    with pytest.raises(NoCertWithin):
        l2_exact(p, "bbbb", max_factors=2, conj_bound=8)


def test_absence_is_stable_under_larger_bounds():
    for bound in (8, 12, 16, 24):
        with pytest.raises(NoCertWithin):
            l2_exact(EX23, "bbbb", max_factors=2, conj_bound=bound)


def test_found_values_are_stable_under_larger_bounds():
    w = "aabbAABB"
    assert l2_exact(EX21, w, 3) == l2_exact(EX21, w, 3, conj_bound=32) == 2


def test_certificate_returned_with_value():
    r = l2_search(EX21, "aabbbAABBB", 4)
    assert r.value == len(r.certificate.factors) == 3
    assert verify(r.certificate)
    assert law_violations(r.certificate) == []


def test_fold_bounds():
    assert l1_upper(EX21, "aaabAAAB") <= 8
    assert l0_upper(EX21, "aaabAAAB") <= 8
    e = l1_upper(EX21, "aabbAABB")
    assert 0 < e <= 2 * 6


@given(st.text(alphabet="abAB", max_size=8))
def test_abelian_area_is_found_for_members(w):
    from dehnlab.words import exponent_sum, free_reduce

    if exponent_sum(w, "a") or exponent_sum(w, "b"):
        with pytest.raises(NoCertWithin):
            l2_exact(EX21, w, 3)
    else:
        r = l2_search(EX21, w, 6)
        assert verify(r.certificate)


def test_sweep_abelian():
    rows = dehn_sweep(EX21, 8)
    assert [r.f2_exact for r in rows] == [0, 0, 0, 1, 1, 2, 2, 3]
    for r in rows:
        assert r.check(None) == []
        assert r.flags == []
        assert r.f1_lower_bracket == math.ceil(r.f2_exact / 2)


def test_sweep_level_one():
    p = builtin("gamma1")
    rows = dehn_sweep(p, 5)
    assert all(r.f2_exact is not None and not r.flags for r in rows)
    assert all(r.check(p.max_relator_length()) == [] for r in rows)


def test_sweep_free_group():
    p = Presentation(("a", "b"), Explicit(()))
    rows = dehn_sweep(p, 3)
    assert all((r.f2_exact, r.f1_upper, r.f0_upper) == (0, 0, 0) for r in rows)
    assert [r.certified for r in rows] == [1, 1, 1]


def test_sweep_guard():
    with pytest.raises(ValueError):
        dehn_sweep(builtin("gamma1"), 12)


def test_growth_fit_quadratic():
    rows = [(x, 3 * x * x) for x in range(2, 12)]
    rep = growth_fit(rows)["f"]
    assert abs(rep["exponent"] - 2) < 0.3
    assert rep["best"] == "x^2"


def test_growth_fit_degenerate_and_short():
    assert growth_fit([(x, 5) for x in range(1, 6)])["f"]["degenerate"]
    with pytest.raises(InsufficientData):
        growth_fit([(1, 1), (2, 4)])


def test_sweep_row_checks():
    row = SweepRow(4, 3, 1, 5, 2, 10)
    assert "f0_upper > 2*f1_upper" in row.check(None)
    assert "f2 > 2*f1_upper" in row.check(None)
