"""Free-group words as plain strings.

A lowercase ASCII letter is a generator, the matching uppercase letter its
inverse, and ``""`` is the empty word.  Strings are immutable and hashable,
which makes them cheap memo keys; every function here returns a new string.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

__all__ = [
    "UnknownGenerator",
    "EndoMap",
    "validate",
    "inverse_letter",
    "invert",
    "free_reduce",
    "multiply",
    "is_reduced",
    "cyclic_reduce",
    "is_cyclically_reduced",
    "conjugate",
    "exponent_sum",
    "occurrences",
    "apply_endomorphism",
    "rotations",
    "generators_of",
    "SIGMA",
    "sigma",
    "sigma_power",
]


class UnknownGenerator(ValueError):
    """A letter outside the active alphabet was found in a word."""


def inverse_letter(x: str) -> str:
    return x.lower() if x.isupper() else x.upper()


def invert(w: str) -> str:
    return w[::-1].swapcase()


def validate(w: str, alphabet: Iterable[str] | None = None) -> str:
    """Check that ``w`` only uses letters of ``alphabet`` (lowercase names).

    With ``alphabet=None`` any ASCII letter is accepted.
    """
    if alphabet is None:
        for x in w:
            if not (x.isascii() and x.isalpha()):
                raise UnknownGenerator(f"{x!r} is not a generator letter")
        return w
    gens = set(alphabet)
    for x in w:
        if x.lower() not in gens or not x.isalpha():
            raise UnknownGenerator(f"{x!r} not in alphabet {sorted(gens)}")
    return w


def free_reduce(w: str, alphabet: Iterable[str] | None = None) -> str:
    if alphabet is not None:
        validate(w, alphabet)
    stack: list[str] = []
    for x in w:
        if stack and stack[-1] == x.swapcase():
            stack.pop()
        else:
            stack.append(x)
    return "".join(stack)


def multiply(*words: str) -> str:
    return free_reduce("".join(words))


def is_reduced(w: str) -> bool:
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def cyclic_reduce(w: str) -> tuple[str, str]:
    """Split a reduced word as ``conjugator * core * conjugator^-1``.

    Returns ``(core, conjugator)`` with ``core`` cyclically reduced.
    """
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j].swapcase():
        i += 1
        j -= 1
    return w[i : j + 1], w[:i]


def is_cyclically_reduced(w: str) -> bool:
    return is_reduced(w) and not (len(w) > 1 and w[0] == w[-1].swapcase())


def conjugate(w: str, x: str) -> str:
    """``x w x^-1``, freely reduced."""
    return free_reduce(x + w + invert(x))


def exponent_sum(w: str, g: str) -> int:
    return w.count(g) - w.count(g.upper())


def occurrences(w: str, g: str) -> int:
    """Number of letters equal to ``g`` or ``g^-1``."""
    return w.count(g) + w.count(g.upper())


def generators_of(w: str) -> set[str]:
    return {x.lower() for x in w}


class EndoMap(Mapping[str, str]):
    """Endomorphism of a free group given by the images of the generators."""

    def __init__(self, images: Mapping[str, str]):
        self._images = {g: free_reduce(img) for g, img in images.items()}
        self._table = dict(self._images)
        self._table.update({g.upper(): invert(img) for g, img in self._images.items()})

    def __getitem__(self, g: str) -> str:
        return self._images[g]

    def __iter__(self):
        return iter(self._images)

    def __len__(self) -> int:
        return len(self._images)

    def __call__(self, w: str) -> str:
        return apply_endomorphism(self, w)

    def __repr__(self) -> str:
        body = ", ".join(f"{g}->{img or '1'}" for g, img in self._images.items())
        return f"EndoMap({body})"


def apply_endomorphism(e: EndoMap, w: str) -> str:
    try:
        return free_reduce("".join(e._table[x] for x in w))
    except KeyError as exc:
        raise UnknownGenerator(f"{exc.args[0]!r} has no image under {e!r}") from None


def rotations(w: str) -> list[str]:
    """All cyclic rotations of ``w`` (with repeats for proper powers)."""
    return [w[i:] + w[:i] for i in range(len(w))] if w else [""]


SIGMA = EndoMap({"a": "aca", "b": "d", "c": "b", "d": "c"})


def sigma(w: str) -> str:
    return apply_endomorphism(SIGMA, w)


def sigma_power(w: str, i: int) -> str:
    for _ in range(i):
        w = sigma(w)
    return w
