"""Group presentations with finite or height-indexed infinite relator sets.

Relator membership is literal: a word is a relator only if it equals a stored
relator letter for letter.  Callers that need a cyclic permutation absorb the
rotation into a conjugator instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, ClassVar, Sequence

from .words import free_reduce, invert, is_cyclically_reduced, sigma, validate

__all__ = [
    "RelatorFamily",
    "Explicit",
    "Lysenok",
    "LysenokStar",
    "GammaLevel",
    "GammaT",
    "AbelianRank2",
    "JockuschKapovich",
    "Presentation",
    "NotASubset",
    "FamilyNotExplicit",
    "StabilizationBlocked",
    "S0",
    "POWER_SEEDS",
    "T_RELATORS",
    "builtin",
    "BUILTINS",
    "load_presentation",
    "dump_presentation",
]

SQUARES = ("aa", "bb", "cc", "dd")
AD4 = "ad" * 4
ADACAC4 = "adacac" * 4
POWER_SEEDS = (AD4, ADACAC4)
S0 = SQUARES + ("bcd", AD4, ADACAC4)
# t g t^-1 sigma(g)^-1 for g = a, b, c, d
T_RELATORS = {g: "t" + g + "T" + invert(sigma(g)) for g in "abcd"}


class NotASubset(ValueError):
    pass


class FamilyNotExplicit(TypeError):
    pass


class StabilizationBlocked(ValueError):
    pass


@lru_cache(maxsize=None)
def _sigma_pow(w: str, i: int) -> str:
    return w if i == 0 else sigma(_sigma_pow(w, i - 1))


@dataclass(frozen=True)
class RelatorFamily:
    kind: ClassVar[str] = "abstract"
    has_heights: ClassVar[bool] = False
    finite: ClassVar[bool] = True

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        raise NotImplementedError

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        for r, h in self.enumerate(len(w)):
            if r == w:
                return True, h
        return False, None

    def height(self, w: str) -> int | None:
        ok, h = self.is_relator(w)
        return h if ok else None

    def words(self) -> list[str]:
        if not self.finite:
            raise FamilyNotExplicit(f"{self.kind} is infinite")
        return [r for r, _ in self.enumerate(10**9)]

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Explicit(RelatorFamily):
    relators: tuple[str, ...] = ()
    kind: ClassVar[str] = "explicit"

    def __post_init__(self):
        rels = tuple(dict.fromkeys(self.relators))
        for r in rels:
            validate(r)
            if not r or not is_cyclically_reduced(r):
                raise ValueError(f"relator {r!r} is not a nonempty cyclically reduced word")
        object.__setattr__(self, "relators", rels)

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        return [(r, None) for r in self.relators if len(r) <= max_len]

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        return (w in self.relators), None

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "words": list(self.relators)}


@dataclass(frozen=True)
class Lysenok(RelatorFamily):
    """S(0) together with sigma^i((ad)^4), sigma^i((adacac)^4) at height i."""

    kind: ClassVar[str] = "lysenok"
    has_heights: ClassVar[bool] = True
    finite: ClassVar[bool] = False
    star: ClassVar[bool] = False

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        out: list[tuple[str, int | None]] = [(r, 0) for r in S0 if len(r) <= max_len]
        i = 1
        while True:
            seeds = (("aa",) if self.star else ()) + POWER_SEEDS
            found = [(_sigma_pow(s, i), i) for s in seeds]
            if min(len(r) for r, _ in found) > max_len:
                return out
            out.extend((r, h) for r, h in found if len(r) <= max_len)
            i += 1

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        if w in S0:
            return True, 0
        n = len(w)
        if n < 6:
            return False, None
        if self.star and (n + 2) & (n + 1) == 0:
            i = (n + 2).bit_length() - 3
            if w == _sigma_pow("aa", i):
                return True, i
        for seed, base in ((AD4, 8), (ADACAC4, 24)):
            if n % base == 0:
                q = n // base
                if q & (q - 1) == 0 and q > 1:
                    i = q.bit_length() - 1
                    if w == _sigma_pow(seed, i):
                        return True, i
        return False, None


@dataclass(frozen=True)
class LysenokStar(Lysenok):
    """Lysenok's relators plus sigma^i(a^2) at height i >= 1."""

    kind: ClassVar[str] = "lysenok_star"
    star: ClassVar[bool] = True


@dataclass(frozen=True)
class GammaLevel(RelatorFamily):
    """The finite truncation R(i) of Lysenok's relators."""

    i: int = 1
    kind: ClassVar[str] = "gamma_level"
    has_heights: ClassVar[bool] = True

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        if self.i <= 0:
            return []
        rels: list[tuple[str, int | None]] = [(r, 0) for r in SQUARES + ("bcd", AD4)]
        for j in range(1, self.i):
            rels.append((_sigma_pow(AD4, j), j))
            rels.append((_sigma_pow(ADACAC4, j - 1), j - 1))
        return [(r, h) for r, h in rels if len(r) <= max_len]

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        for r, h in self.enumerate(len(w)):
            if r == w:
                return True, h
        return False, None

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "i": self.i}


@dataclass(frozen=True)
class GammaT(RelatorFamily):
    """Finite presentation of the ascending HNN extension with stable letter t."""

    kind: ClassVar[str] = "gamma_t"

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        rels = S0 + tuple(T_RELATORS.values())
        return [(r, None) for r in rels if len(r) <= max_len]

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        return (w in S0 or w in T_RELATORS.values()), None


@dataclass(frozen=True)
class AbelianRank2(RelatorFamily):
    """a^i b a^-i b^-1 for every i >= 1."""

    kind: ClassVar[str] = "abelian_rank2"
    finite: ClassVar[bool] = False

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        return [("a" * i + "b" + "A" * i + "B", None) for i in range(1, (max_len - 2) // 2 + 1)]

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        i = (len(w) - 2) // 2
        return (i >= 1 and w == "a" * i + "b" + "A" * i + "B"), None


@dataclass(frozen=True)
class JockuschKapovich(RelatorFamily):
    """a^i and a^i b^(k_i) for the i-th element k_i of a finite list K."""

    K: tuple[int, ...] = (1,)
    kind: ClassVar[str] = "jockusch_kapovich"

    def __post_init__(self):
        object.__setattr__(self, "K", tuple(int(k) for k in self.K))
        if any(k < 1 for k in self.K):
            raise ValueError("K must contain positive integers")

    def enumerate(self, max_len: int) -> list[tuple[str, int | None]]:
        out = []
        for i, k in enumerate(self.K, start=1):
            for r in ("a" * i, "a" * i + "b" * k):
                if len(r) <= max_len:
                    out.append((r, None))
        return out

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "K": list(self.K)}


_FAMILY_KINDS = {
    cls.kind: cls
    for cls in (Explicit, Lysenok, LysenokStar, GammaLevel, GammaT, AbelianRank2, JockuschKapovich)
}


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    family: RelatorFamily
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if len(g) != 1 or not (g.isascii() and g.islower()):
                raise ValueError(f"generator {g!r} must be a single lowercase ASCII letter")
        if isinstance(self.family, Explicit):
            for r in self.family.relators:
                validate(r, self.generators)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def finite(self) -> bool:
        return self.family.finite

    def enumerate_relators(self, max_len: int) -> list[tuple[str, int | None]]:
        if max_len < 1:
            return []
        return self.family.enumerate(max_len)

    def is_relator(self, w: str) -> tuple[bool, int | None]:
        return self.family.is_relator(w)

    def relators(self) -> list[str]:
        return self.family.words()

    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators()), default=0)

    def materialize(self, max_len: int | None = None) -> "Presentation":
        """Freeze the relators (of length <= max_len if infinite) as an explicit list."""
        if self.family.finite:
            words = self.relators()
        elif max_len is None:
            raise FamilyNotExplicit(f"{self.family.kind} is infinite; give max_len")
        else:
            words = [r for r, _ in self.enumerate_relators(max_len)]
        return Presentation(self.generators, Explicit(tuple(words)), self.name)

    def to_json(self) -> dict[str, Any]:
        return {"generators": list(self.generators), "relators": self.family.to_json()}

    def __str__(self) -> str:
        return self.name or f"<{','.join(self.generators)} | {self.family.kind}>"


def t_transform(p: Presentation, s: Sequence[str], u: Sequence[str]) -> Presentation:
    """Replace the relators ``s`` of an explicit presentation by ``u``.

    Equality of normal closures is the caller's obligation.
    """
    if not isinstance(p.family, Explicit):
        raise FamilyNotExplicit(f"T-transformation needs explicit relators, got {p.family.kind}")
    missing = [w for w in s if w not in p.family.relators]
    if missing:
        raise NotASubset(f"not relators of {p}: {missing}")
    kept = [r for r in p.family.relators if r not in set(s)]
    return Presentation(p.generators, Explicit(tuple(kept) + tuple(u)), p.name)


def stabilize(p: Presentation, b: str, add: bool = True) -> Presentation:
    if not isinstance(p.family, Explicit):
        raise FamilyNotExplicit(f"stabilization needs explicit relators, got {p.family.kind}")
    rels = p.family.relators
    if add:
        if b in p.generators:
            raise StabilizationBlocked(f"{b!r} is already a generator")
        return Presentation(p.generators + (b,), Explicit(rels + (b,)), p.name)
    if b not in p.generators or b not in rels:
        raise StabilizationBlocked(f"{b!r} must be both a generator and a relator")
    others = [r for r in rels if r != b]
    if any(b in r.lower() for r in others):
        raise StabilizationBlocked(f"{b!r} occurs in another relator")
    return Presentation(tuple(g for g in p.generators if g != b), Explicit(tuple(others)), p.name)


def enumerate_relators(p: Presentation, max_len: int) -> list[tuple[str, int | None]]:
    return p.enumerate_relators(max_len)


def is_relator(p: Presentation, w: str) -> tuple[bool, int | None]:
    return p.is_relator(w)


BUILTINS = ("lysenok", "lysenok_star", "gamma1", "gamma2", "gamma_t", "ex21", "ex23")


def builtin(name: str) -> Presentation:
    abcd = ("a", "b", "c", "d")
    table = {
        "lysenok": lambda: Presentation(abcd, Lysenok(), "lysenok"),
        "lysenok_star": lambda: Presentation(abcd, LysenokStar(), "lysenok_star"),
        "gamma1": lambda: Presentation(abcd, GammaLevel(1), "gamma1"),
        "gamma2": lambda: Presentation(abcd, GammaLevel(2), "gamma2"),
        "gamma_t": lambda: Presentation(abcd + ("t",), GammaT(), "gamma_t"),
        "ex21": lambda: Presentation(("a", "b"), AbelianRank2(), "ex21"),
        "ex23": lambda: Presentation(("a", "b"), JockuschKapovich((1, 2, 5)), "ex23"),
    }
    try:
        return table[name]()
    except KeyError:
        raise ValueError(f"unknown presentation {name!r}; builtins are {', '.join(BUILTINS)}") from None


def presentation_from_json(data: dict[str, Any]) -> Presentation:
    gens = tuple(data["generators"])
    rel = data["relators"]
    kind = rel["kind"]
    cls = _FAMILY_KINDS.get(kind)
    if cls is None:
        raise ValueError(f"unknown relator kind {kind!r}")
    if cls is Explicit:
        family: RelatorFamily = Explicit(tuple(free_reduce(w) for w in rel.get("words", [])))
    elif cls is GammaLevel:
        family = GammaLevel(int(rel["i"]))
    elif cls is JockuschKapovich:
        family = JockuschKapovich(tuple(rel["K"]))
    else:
        family = cls()
    return Presentation(gens, family, data.get("name", ""))


def load_presentation(spec: str) -> Presentation:
    """A builtin name or a path to a presentation JSON file."""
    if spec in BUILTINS:
        return builtin(spec)
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"{spec!r} is neither a builtin presentation nor a file")
    p = presentation_from_json(json.loads(path.read_text()))
    return replace(p, name=p.name or path.stem)


def dump_presentation(p: Presentation) -> str:
    return json.dumps(p.to_json())

