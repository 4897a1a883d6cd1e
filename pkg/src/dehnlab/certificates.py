"""Conjugate-product certificates ``W = prod X_j R_j^e_j X_j^-1``.

A certificate is checked by multiplying out in the free group, so a verified
certificate is a proof that its word lies in the normal closure of the
presentation's relators.  The transformations below (sigma lift, removal of
sigma^i(a^2) factors, relator substitution, transport to the HNN extension)
map verifying certificates to verifying certificates.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .presentations import (
    POWER_SEEDS,
    S0,
    T_RELATORS,
    Presentation,
    builtin,
    load_presentation,
    presentation_from_json,
)
from .words import cyclic_reduce, free_reduce, invert, sigma

__all__ = [
    "Factor",
    "Certificate",
    "ForeignRelator",
    "NoHeights",
    "MissingReplacement",
    "conjugate_factors",
    "invert_factors",
    "expand",
    "product",
    "verify",
    "h_star_tuple",
    "cost_f2",
    "cost_f1_bound",
    "height_weighted_cost",
    "absorb_rotation",
    "sigma_lift",
    "peel_squares",
    "eliminate_sigma_a2",
    "apply_t_transformation",
    "sigma_expansion",
    "relator_over_gamma_t",
    "t_transport",
    "load_certificate",
    "dump_certificate",
]


class ForeignRelator(ValueError):
    """A factor uses a word that is not a relator of the presentation."""


class NoHeights(TypeError):
    pass


class MissingReplacement(KeyError):
    pass


@dataclass(frozen=True)
class Factor:
    conj: str
    relator: str
    sign: int = 1

    def word(self) -> str:
        r = self.relator if self.sign > 0 else invert(self.relator)
        return self.conj + r + invert(self.conj)

    def conjugated(self, x: str) -> "Factor":
        return Factor(free_reduce(x + self.conj), self.relator, self.sign)

    def inverse(self) -> "Factor":
        return Factor(self.conj, self.relator, -self.sign)


@dataclass(frozen=True)
class Certificate:
    word: str
    presentation: Presentation
    factors: tuple[Factor, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __len__(self) -> int:
        return len(self.factors)

    def product(self) -> str:
        return product(self.factors)

    def verify(self) -> bool:
        return verify(self)

    def normalize(self) -> "Certificate":
        """Freely reduce every conjugator."""
        fs = tuple(Factor(free_reduce(f.conj), f.relator, f.sign) for f in self.factors)
        return replace(self, factors=fs)

    def heights(self) -> list[int]:
        return [_height(self.presentation, f.relator) for f in self.factors]

    def to_json(self) -> dict[str, Any]:
        p = self.presentation
        return {
            "word": self.word,
            "presentation": p.name if p.name else p.to_json(),
            "factors": [{"conj": f.conj, "relator": f.relator, "sign": f.sign} for f in self.factors],
        }


def conjugate_factors(factors: Iterable[Factor], x: str) -> list[Factor]:
    return [f.conjugated(x) for f in factors]


def invert_factors(factors: Sequence[Factor]) -> list[Factor]:
    """Factors whose product is the inverse of the product of ``factors``."""
    return [f.inverse() for f in reversed(factors)]


def expand(f: Factor, sub: Sequence[Factor]) -> list[Factor]:
    """Replace ``f`` by a product ``sub`` that equals ``f.relator``."""
    inner = list(sub) if f.sign > 0 else invert_factors(sub)
    return conjugate_factors(inner, f.conj)


def product(factors: Iterable[Factor]) -> str:
    stack: list[str] = []
    for f in factors:
        for x in f.word():
            if stack and stack[-1] == x.swapcase():
                stack.pop()
            else:
                stack.append(x)
    return "".join(stack)


def _check_relators(c: Certificate) -> None:
    seen: set[str] = set()
    for f in c.factors:
        if f.relator in seen:
            continue
        ok, _ = c.presentation.is_relator(f.relator)
        if not ok:
            raise ForeignRelator(f"{f.relator!r} is not a relator of {c.presentation}")
        seen.add(f.relator)


def verify(c: Certificate) -> bool:
    _check_relators(c)
    return product(c.factors) == free_reduce(c.word)


def _height(p: Presentation, r: str) -> int:
    if not p.family.has_heights:
        raise NoHeights(f"{p} has no relator heights")
    ok, h = p.is_relator(r)
    if not ok:
        raise ForeignRelator(f"{r!r} is not a relator of {p}")
    return int(h)


def h_star_tuple(c: Certificate) -> tuple[int, ...]:
    """Counts of factors per relator height, trailing zeros dropped."""
    if not c.presentation.family.has_heights:
        raise NoHeights(f"{c.presentation} has no relator heights")
    counts = Counter(c.heights())
    top = max(counts, default=-1)
    return tuple(counts.get(i, 0) for i in range(top + 1))


def cost_f2(c: Certificate) -> int:
    return len(c.factors)


def cost_f1_bound(c: Certificate) -> int:
    return sum(len(f.relator) for f in c.factors) + math.ceil(len(free_reduce(c.word)) / 2)


def height_weighted_cost(c: Certificate) -> int:
    """Sum over factors of the longest relator length at that height, 3 * 2^(h+3)."""
    return sum(3 * 2 ** (h + 3) * n for h, n in enumerate(h_star_tuple(c)))


def absorb_rotation(p: Presentation, w: str) -> tuple[str, str, int] | None:
    """Write ``w`` as ``delta R^e delta^-1`` for a stored relator R.

    Returns ``(delta, R, e)`` with the shortest ``delta`` found, or None if the
    cyclic core of ``w`` is not a rotation of a relator or its inverse.
    """
    core, y = cyclic_reduce(w)
    if not core:
        return None
    best: tuple[str, str, int] | None = None
    n = len(core)
    for r, _ in p.enumerate_relators(n):
        if len(r) != n:
            continue
        for sign, rr in ((1, r), (-1, invert(r))):
            pos = (rr + rr).find(core)
            while 0 <= pos < n:
                # core = rr[pos:] + rr[:pos]; rr is r or r^-1
                for delta in (free_reduce(y + invert(rr[:pos])), free_reduce(y + rr[pos:])):
                    if best is None or len(delta) < len(best[0]):
                        best = (delta, r, sign)
                pos = (rr + rr).find(core, pos + 1)
    return best


_STAR = builtin("lysenok_star")
_LYSENOK = builtin("lysenok")
_GAMMA_T = builtin("gamma_t")


@lru_cache(maxsize=4096)
def _lift_relator(r: str) -> tuple[str, str, int]:
    img = sigma(r)
    ok, _ = _STAR.is_relator(img)
    if ok:
        return "", img, 1
    found = absorb_rotation(_STAR, img)
    if found is None:
        raise ForeignRelator(f"sigma({r!r}) is not a relator up to rotation")
    return found


def sigma_lift(c: Certificate) -> Certificate:
    """Certificate for sigma(W) over the extended Lysenok relators."""
    factors = []
    for f in c.factors:
        if not c.presentation.is_relator(f.relator)[0]:
            raise ForeignRelator(f"{f.relator!r} is not a relator of {c.presentation}")
        delta, r, e = _lift_relator(f.relator)
        factors.append(Factor(sigma(f.conj) + delta, r, f.sign * e))
    return Certificate(sigma(c.word), _STAR, tuple(factors))


def peel_squares(w: str) -> list[Factor]:
    """Factors g^2 deleted left to right from a positive word trivial in the free product of C2's."""
    factors = []
    rest = w
    while rest:
        for i in range(len(rest) - 1):
            if rest[i] == rest[i + 1]:
                factors.append(Factor(rest[:i], rest[i] * 2, 1))
                rest = rest[:i] + rest[i + 2 :]
                break
        else:
            raise ValueError(f"{w!r} does not collapse by deleting squares")
    return factors


@lru_cache(maxsize=None)
def _sigma_a2_factors(r: str) -> tuple[Factor, ...]:
    return tuple(peel_squares(r))


def _is_sigma_a2(r: str) -> bool:
    ok, h = _STAR.is_relator(r)
    return ok and bool(h) and r[0] == "a" and r[-1] == "a" and (len(r) + 2) & (len(r) + 1) == 0


def eliminate_sigma_a2(c: Certificate) -> Certificate:
    """Replace every sigma^i(a^2) factor by 2^(i+1) - 1 conjugates of squares."""
    factors: list[Factor] = []
    for f in c.factors:
        if _is_sigma_a2(f.relator):
            factors.extend(expand(f, _sigma_a2_factors(f.relator)))
        else:
            factors.append(f)
    return Certificate(c.word, _LYSENOK, tuple(factors))


def apply_t_transformation(
    c: Certificate, replacements: Mapping[str, Certificate], target: Presentation
) -> Certificate:
    """Splice a certificate over ``target`` in place of every relator missing from it."""
    factors: list[Factor] = []
    for f in c.factors:
        if target.is_relator(f.relator)[0]:
            factors.append(f)
            continue
        sub = replacements.get(f.relator)
        if sub is None:
            raise MissingReplacement(f.relator)
        factors.extend(expand(f, sub.factors))
    return Certificate(c.word, target, tuple(factors))


def sigma_expansion(y: str) -> list[Factor]:
    """Factors over the t-relators whose product is ``sigma(y) (t y t^-1)^-1``."""
    factors = []
    for k, x in enumerate(y):
        g = x.lower()
        if x == g:
            factors.append(Factor("t" + y[:k] + "T", T_RELATORS[g], -1))
        else:
            factors.append(Factor("t" + y[: k + 1] + "T", T_RELATORS[g], 1))
    return factors


@lru_cache(maxsize=None)
def relator_over_gamma_t(seed: str, j: int) -> tuple[Factor, ...]:
    """Annular expansion of sigma^j(seed) around a single seed face."""
    factors: list[Factor] = []
    ys = [seed]
    for _ in range(j - 1):
        ys.append(sigma(ys[-1]))
    for m in range(j):
        factors.extend(conjugate_factors(sigma_expansion(ys[j - 1 - m]), "t" * m))
    factors.append(Factor("t" * j, seed, 1))
    return tuple(factors)


def t_transport(c: Certificate) -> Certificate:
    """Rewrite a certificate over Lysenok's relators as one over the finite HNN presentation."""
    factors: list[Factor] = []
    for f in c.factors:
        if f.relator in S0:
            factors.append(f)
            continue
        ok, h = _LYSENOK.is_relator(f.relator)
        if not ok:
            raise ForeignRelator(f"{f.relator!r} is not one of Lysenok's relators")
        seed = next(s for s in POWER_SEEDS if len(s) * 2**h == len(f.relator))
        factors.extend(expand(f, relator_over_gamma_t(seed, h)))
    return Certificate(c.word, _GAMMA_T, tuple(factors))


def certificate_from_json(data: Mapping[str, Any]) -> Certificate:
    pres = data["presentation"]
    p = presentation_from_json(pres) if isinstance(pres, Mapping) else load_presentation(pres)
    fs = tuple(Factor(f.get("conj", ""), f["relator"], int(f.get("sign", 1))) for f in data["factors"])
    for f in fs:
        if f.sign not in (1, -1):
            raise ValueError(f"factor sign must be +1 or -1, got {f.sign}")
    return Certificate(data["word"], p, fs)


def load_certificate(path: str) -> Certificate:
    with open(path) as fh:
        return certificate_from_json(json.load(fh))


def dump_certificate(c: Certificate, path: str | None = None) -> str:
    text = json.dumps(c.to_json())
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
