import json

import pytest

from dehnlab.presentations import (
    BUILTINS,
    AbelianRank2,
    Explicit,
    FamilyNotExplicit,
    GammaLevel,
    JockuschKapovich,
    Presentation,
    builtin,
    dump_presentation,
    load_presentation,
)
from dehnlab.words import sigma_power


def test_builtins_load():
    for name in BUILTINS:
        p = load_presentation(name)
        assert p.name == name


def test_lysenok_relators_and_heights():
    p = builtin("lysenok")
    rels = dict(p.enumerate_relators(64))
    for r in ("aa", "bb", "cc", "dd", "bcd", "ad" * 4, "adacac" * 4):
        assert rels[r] == 0
    assert rels[sigma_power("ad" * 4, 1)] == 1
    assert rels[sigma_power("adacac" * 4, 1)] == 1
    assert sigma_power("aa", 1) not in rels


def test_star_adds_sigma_a2():
    p = builtin("lysenok_star")
    assert p.is_relator(sigma_power("aa", 3)) == (True, 3)
    assert p.is_relator("acaaca") == (True, 1)
    assert not builtin("lysenok").is_relator("acaaca")[0]


def test_is_relator_is_literal():
    p = builtin("lysenok")
    assert p.is_relator("bcd") == (True, 0)
    assert p.is_relator("cdb") == (False, None)


def test_gamma_levels():
    assert [r for r, _ in builtin("gamma1").enumerate_relators(100)] == [
        "aa", "bb", "cc", "dd", "bcd", "adadadad"
    ]
    g2 = dict(builtin("gamma2").enumerate_relators(100))
    assert g2[sigma_power("ad" * 4, 1)] == 1
    assert Presentation(("a",), GammaLevel(0)).enumerate_relators(10) == []


def test_abelian_family():
    p = builtin("ex21")
    assert [r for r, _ in p.enumerate_relators(8)] == ["abAB", "aabAAB", "aaabAAAB"]
    assert p.is_relator("aabAAB")[0]
    assert not p.is_relator("abAAB")[0]
    assert not p.finite


def test_jockusch_kapovich_family():
    p = Presentation(("a", "b"), JockuschKapovich((1, 2, 5)))
    assert [r for r, _ in p.enumerate_relators(10)] == ["a", "ab", "aa", "aabb", "aaa", "aaabbbbb"]
    with pytest.raises(ValueError):
        JockuschKapovich((0,))


def test_explicit_validation():
    with pytest.raises(ValueError):
        Explicit(("aA",))
    with pytest.raises(ValueError):
        Explicit(("",))
    with pytest.raises(ValueError):
        Presentation(("a",), Explicit(("ab",)))


def test_infinite_family_has_no_word_list():
    with pytest.raises(FamilyNotExplicit):
        builtin("lysenok").relators()
    assert builtin("ex21").materialize(6).relators() == ["abAB", "aabAAB"]


def test_json_round_trip(tmp_path):
    for p in (builtin("gamma2"), builtin("ex23"), Presentation(("x", "y"), Explicit(("xyXY",)), "z2")):
        path = tmp_path / "p.json"
        path.write_text(dump_presentation(p))
        q = load_presentation(str(path))
        assert q == p
        assert json.loads(dump_presentation(q)) == json.loads(dump_presentation(p))


def test_unknown_presentation():
    with pytest.raises(ValueError):
        load_presentation("no-such-thing")
    assert isinstance(builtin("ex21").family, AbelianRank2)
