"""Shared checks: diagram laws and the certificate registry."""

from __future__ import annotations

from dehnlab.certificates import Certificate
from dehnlab.diagrams import fold, from_certificate, is_one_regular
from dehnlab.words import free_reduce

# every certificate that passed verify() during the session
REGISTRY: list[Certificate] = []
# criterion number -> (passed, detail)
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str = "") -> None:
    prev = RESULTS.get(n)
    if prev is not None and not prev[0]:
        return
    RESULTS[n] = (ok, detail)


def law_violations(c: Certificate) -> list[str]:
    """Diagram laws that fail for the folded diagram of ``c``."""
    d = fold(from_certificate(c))
    k = d.counts()
    bad = []
    if free_reduce(d.boundary_word()) != free_reduce(c.word):
        bad.append(f"boundary {d.boundary_word()!r} != {c.word!r}")
    if k.euler != 1:
        bad.append(f"euler {k.euler}")
    if k.e > 0 and (k.v > 2 * k.e or k.f > 2 * k.e):
        bad.append(f"cell inequality {k}")
    rank = c.presentation.rank
    if is_one_regular(d) and all(len(f.relator) > 1 for f in c.factors):
        if k.e > 3 * (1 + 2 * rank) * k.v:
            bad.append(f"edge bound on a 1-regular diagram {k}")
    return bad
