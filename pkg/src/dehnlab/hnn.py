"""The ascending HNN extension of the Grigorchuk group by sigma.

The stable letter ``t`` conjugates each generator to its sigma-image, so
``t X t^-1`` can always be traded for ``sigma(X)`` when ``X`` is t-free.
Repeating this removes every ``t`` from a word of t-exponent zero, reducing
the word problem to the one for the base group.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .certificates import (
    Certificate,
    Factor,
    conjugate_factors,
    invert_factors,
    sigma_expansion,
    t_transport,
    verify,
)
from .grigorchuk import NotTrivial, decompose_R, is_trivial_gamma
from .presentations import S0, T_RELATORS, builtin
from .words import exponent_sum, free_reduce, invert, occurrences, sigma, validate

__all__ = [
    "NonzeroTExponent",
    "EliminationTrace",
    "t_eliminate",
    "t_eliminate_trace",
    "is_trivial_gamma_t",
    "decompose_gamma_t",
    "random_trivial_word",
    "audit_gamma_t_bounds",
]

ALPHABET = ("a", "b", "c", "d", "t")
GAMMA_T = builtin("gamma_t")


class NonzeroTExponent(ValueError):
    pass


@dataclass
class EliminationTrace:
    """Result of removing all t-letters.

    ``factors`` are conjugated t-relators with ``w = (factors) * z u z^-1``
    in the free group, where ``z`` is ``conjugator``.  ``steps`` counts the
    t-relator instances used and ``pairs`` the number of ``t ... t^-1``
    pairs removed; ``a_counts`` records the a-occurrences after each pair.
    """

    word: str
    u: str
    conjugator: str
    factors: list[Factor] = field(default_factory=list)
    pairs: int = 0
    a_counts: list[int] = field(default_factory=list)
    lengths: list[int] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.factors)


def _innermost_pair(w: str) -> tuple[int, int] | None:
    """Leftmost ``t X t^-1`` with X t-free, as indices of the two t-letters."""
    last_t = -1
    for i, x in enumerate(w):
        if x == "t":
            last_t = i
        elif x == "T":
            if last_t >= 0:
                return last_t, i
            last_t = -1
    return None


def t_eliminate_trace(w: str) -> EliminationTrace:
    validate(w, ALPHABET)
    if exponent_sum(w, "t"):
        raise NonzeroTExponent(f"{w!r} has t-exponent {exponent_sum(w, 't')}")
    c = free_reduce(w)
    tr = EliminationTrace(w, c, "")
    z = ""
    while "t" in c or "T" in c:
        pair = _innermost_pair(c)
        if pair is None:
            # every t^-1 precedes every t: rotate to start at the first t
            k = c.index("t")
            # c = P Q = Q^-1 (Q P) Q
            z += invert(c[k:])
            c = free_reduce(c[k:] + c[:k])
            continue
        i, j = pair
        head, x, tail = c[:i], c[i + 1 : j], c[j + 1 :]
        # t X T = (factors) * sigma(X)
        tr.factors.extend(conjugate_factors(invert_factors(sigma_expansion(x)), z + head))
        c = free_reduce(head + sigma(x) + tail)
        tr.pairs += 1
        tr.a_counts.append(occurrences(c, "a"))
        tr.lengths.append(len(c))
    tr.u = c
    tr.conjugator = z
    return tr


def t_eliminate(w: str) -> tuple[str, int]:
    """Remove every t from a word of t-exponent zero.

    Returns the t-free word and the number of t-relator instances used.
    The result is conjugate to ``w`` in the extension (equal when no
    rotation was needed).
    """
    tr = t_eliminate_trace(w)
    return tr.u, tr.steps


def is_trivial_gamma_t(w: str) -> bool:
    validate(w, ALPHABET)
    if exponent_sum(w, "t"):
        return False
    # the base group embeds, so a t-free word is trivial iff it is in the base
    return is_trivial_gamma(t_eliminate_trace(w).u)


def decompose_gamma_t(w: str, budget: int = 20_000) -> Certificate:
    """Certificate over the finite presentation of the extension.

    t-relator factors from the elimination, then the base-group certificate
    of the eliminated word rewritten over the finite relators.
    """
    validate(w, ALPHABET)
    if exponent_sum(w, "t"):
        raise NotTrivial(f"{w!r} has nonzero t-exponent")
    tr = t_eliminate_trace(w)
    if not is_trivial_gamma(tr.u):
        raise NotTrivial(f"{w!r} is not trivial")
    base = t_transport(decompose_R(tr.u, budget))
    factors = list(tr.factors) + conjugate_factors(base.factors, tr.conjugator)
    return Certificate(w, GAMMA_T, tuple(factors))


def random_trivial_word(rng: random.Random, max_len: int = 14) -> str:
    """A nonempty trivial word of length at most ``max_len``.

    Built as a product of one or two conjugates of defining relators,
    ``t X t^-1 sigma(X)^-1`` blocks, or t-conjugates of short base relators,
    then freely reduced; words that come out too long or empty are resampled.
    """
    short = [r for r in S0 if len(r) <= 8] + list(T_RELATORS.values())
    letters = "abcdtABCDT"
    while True:
        parts = []
        for _ in range(rng.randint(1, 2)):
            kind = rng.random()
            if kind < 0.4:
                r = rng.choice(short)
            elif kind < 0.8:
                x = "".join(rng.choice("abcdABCD") for _ in range(rng.randint(1, 3)))
                r = "t" + x + "T" + invert(sigma(x))
            else:
                r = "t" + rng.choice(short) + "T"
            if rng.random() < 0.5:
                r = invert(r)
            conj = "".join(rng.choice(letters) for _ in range(rng.randint(0, 3)))
            parts.append(conj + r + invert(conj))
        w = free_reduce("".join(parts))
        if 0 < len(w) <= max_len:
            return w


def audit_gamma_t_bounds(
    x_max: int = 14, budget: int = 20_000, samples: int = 200, seed: int = 20240601
) -> dict:
    """Check the length and step bounds of t-elimination on sampled trivial words."""
    rng = random.Random(seed)
    rows = []
    violations = 0
    for _ in range(samples):
        w = random_trivial_word(rng, x_max)
        x = len(w)
        tr = t_eliminate_trace(w)
        cert = decompose_gamma_t(w, budget)
        limit = 2 ** (x / 2)
        ok_u = len(tr.u) <= 6 * limit
        ok_steps = tr.steps <= 12 * limit
        a0 = occurrences(free_reduce(w), "a")
        doubling = all(b <= 2 * a for a, b in zip([a0] + tr.a_counts, tr.a_counts))
        violations += not (ok_u and ok_steps)
        rows.append(
            {
                "word": w,
                "x": x,
                "u_len": len(tr.u),
                "steps": tr.steps,
                "pairs": tr.pairs,
                "factors": len(cert.factors),
                "verified": verify(cert),
                "u_bound_ok": ok_u,
                "steps_bound_ok": ok_steps,
                "a_doubling_ok": doubling,
                "ratio": len(cert.factors) / (x * 2**x),
            }
        )
    return {
        "seed": seed,
        "x_max": x_max,
        "samples": samples,
        "violations": violations,
        "all_verified": all(r["verified"] for r in rows),
        "max_ratio": max((r["ratio"] for r in rows), default=0.0),
        "rows": rows,
    }
