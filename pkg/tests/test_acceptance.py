"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints.
"""

import itertools
import math
import random

import pytest

from dehnlab.certificates import Certificate, Factor, eliminate_sigma_a2, h_star_tuple, verify
from dehnlab.estimator import NoCertWithin, l2_search
from dehnlab.grigorchuk import (
    STAR,
    decompose,
    decompose_R,
    first_moving_level,
    is_trivial_gamma,
    psi0,
    rewrite_to_H,
)
from dehnlab.hnn import audit_gamma_t_bounds, decompose_gamma_t, random_trivial_word
from dehnlab.presentations import builtin
from dehnlab.words import free_reduce, sigma, sigma_power
from laws import law_violations, record

SEED = 20240601


def _all_words(n):
    for tup in itertools.product("abcdABCD", repeat=n):
        yield "".join(tup)


def test_criterion_1_solver_certificate_oracle():
    trivial = bad_cert = bad_oracle = 0
    for n in range(7):
        for w in _all_words(n):
            if is_trivial_gamma(w):
                trivial += 1
                if not verify(decompose(w)):
                    bad_cert += 1
            elif first_moving_level(w, 12) is None:
                bad_oracle += 1
    ok = bad_cert == 0 and bad_oracle == 0
    record(1, ok, f"{trivial} trivial words certified, {bad_cert} bad certificates, {bad_oracle} oracle misses")
    assert ok


def _height_ok(c, n):
    tau = h_star_tuple(c)
    return all(t == 0 for j, t in enumerate(tau) if j > math.log2(n))


def test_criterion_2_relator_series():
    problems = []
    for i in range(7):
        for seed, base in (("ad" * 4, 8), ("adacac" * 4, 24)):
            w = sigma_power(seed, i)
            if len(w) != base * 2**i:
                problems.append((seed, i, "length"))
            if not is_trivial_gamma(w):
                problems.append((seed, i, "solver"))
            c = decompose(w)
            if not verify(c) or not _height_ok(c, len(w)):
                problems.append((seed, i, "certificate"))
    record(2, not problems, f"14 relators, problems={problems}")
    assert not problems


def test_criterion_3_sigma_a2_elimination():
    problems = []
    for i in range(1, 9):
        w = sigma_power("aa", i)
        if len(w) != 2 ** (i + 2) - 2:
            problems.append((i, "length", len(w)))
        c = eliminate_sigma_a2(Certificate(w, STAR, (Factor("", w, 1),)))
        if len(c.factors) != 2 ** (i + 1) - 1:
            problems.append((i, "factors", len(c.factors)))
        if any(h != 0 for h in [c.presentation.family.height(f.relator) for f in c.factors]):
            problems.append((i, "height"))
        if not verify(c):
            problems.append((i, "verify"))
    record(3, not problems, f"i=1..8, problems={problems}")
    assert not problems


def test_criterion_4_psi_tables():
    psi = {
        "b": ("a", "c"),
        "c": ("a", "d"),
        "d": ("", "b"),
        "aba": ("c", "a"),
        "aca": ("d", "a"),
        "ada": ("b", ""),
        "aa": ("", ""),
    }
    psisig = {"a": ("d", "a"), "b": ("", "b"), "c": ("a", "c"), "d": ("a", "d")}
    got_psi = {t: psi0(((t, 1),)) for t in psi}
    got_sig = {g: psi0(rewrite_to_H(sigma(g))) for g in psisig}
    ok = got_psi == psi and got_sig == psisig
    record(4, ok, f"psi0={got_psi == psi}, psi0*sigma={got_sig == psisig}")
    assert ok


def _corpus():
    """Certificates from every producer in the package."""
    seen = set()
    for n in range(1, 7):
        for w in _all_words(n):
            w = free_reduce(w)
            if w in seen or not is_trivial_gamma(w):
                continue
            seen.add(w)
            yield decompose(w)
            yield decompose_R(w)
    for i in range(4):
        for seed in ("ad" * 4, "adacac" * 4):
            yield decompose(sigma_power(seed, i))
    for i in range(1, 6):
        w = sigma_power("aa", i)
        yield eliminate_sigma_a2(Certificate(w, STAR, (Factor("", w, 1),)))
    rng = random.Random(SEED)
    for _ in range(100):
        yield decompose_gamma_t(random_trivial_word(rng, 14))
    ex21, ex23 = builtin("ex21"), builtin("ex23")
    for i, j in itertools.product(range(1, 4), repeat=2):
        yield l2_search(ex21, "a" * i + "b" * j + "A" * i + "B" * j, j + 1).certificate
    for k in (1, 2, 5):
        yield l2_search(ex23, "b" * k, 2).certificate


def test_criterion_5_diagram_laws():
    n = 0
    failures = []
    for c in _corpus():
        n += 1
        bad = law_violations(c)
        if bad:
            failures.append((c.word, bad))
    record(5, not failures, f"{n} certificates folded, {len(failures)} violations")
    assert not failures, failures[:5]


def test_criterion_6_abelian_example():
    p = builtin("ex21")
    problems = []
    for i in range(1, 6):
        w = "a" * i + "b" + "A" * i + "B"
        r = l2_search(p, w, 2)
        if r.value != 1 or not verify(r.certificate):
            problems.append((w, r.value))
    for i, j in itertools.product(range(1, 4), repeat=2):
        w = "a" * i + "b" * j + "A" * i + "B" * j
        r = l2_search(p, w, j + 1)
        doubled = l2_search(p, w, j + 1, 2 * r.conj_bound)
        if not (r.value == doubled.value == j) or not verify(r.certificate):
            problems.append((w, r.value, doubled.value))
    record(6, not problems, f"5 conjugates of relators and 9 commutators, problems={problems}")
    assert not problems


def test_criterion_7_finite_K_example():
    p = builtin("ex23")
    problems = []
    for k in (1, 2, 5):
        r = l2_search(p, "b" * k, 4)
        if r.value != 2 or not verify(r.certificate):
            problems.append((k, r.value))
    for k in (3, 4):
        with pytest.raises(NoCertWithin):
            l2_search(p, "b" * k, 2, k + 8)
    record(7, not problems, f"k in (1,2,5) give 2; k in (3,4) have no 2-factor certificate")
    assert not problems


def test_criterion_8_hnn_elimination():
    rep = audit_gamma_t_bounds(14, samples=200, seed=SEED)
    ok = rep["violations"] == 0 and rep["all_verified"] and len(rep["rows"]) == 200
    record(8, ok, f"seed={rep['seed']}, violations={rep['violations']}, verified={rep['all_verified']}")
    assert ok


def test_criterion_9_bound_audit():
    from dehnlab.grigorchuk import audit_gamma_bounds

    rep = audit_gamma_bounds(12)
    f2 = max(r["f2_ratio"] for r in rep["rows"])
    f1 = max(r["f1_ratio"] for r in rep["rows"])
    ok = rep["all_verified"] and rep["height_support"] and f2 <= 100 and f1 <= 2000
    record(
        9,
        ok,
        f"max f2/x^2={f2:.3f}, max f1/(x^2 log2 x)={f1:.3f}, fitted constants "
        f"{rep['fitted_f2_constant']:.3f}, {rep['fitted_f1_constant']:.3f}",
    )
    assert ok
