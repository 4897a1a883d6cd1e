"""Van Kampen diagrams as half-edge structures.

A diagram is stored combinatorially: each edge is a pair of twin half-edges,
each half-edge knows its origin, label and successor around its face, and
faces are the cycles of the successor map.  Face 0 is the outer face.  No
geometry is ever computed; planarity is kept by construction, since the
wedge of lollipops is planar and every fold below is a planar surgery.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .certificates import Certificate, verify
from .words import free_reduce, invert

__all__ = [
    "InvalidCertificate",
    "CellCounts",
    "Diagram",
    "from_certificate",
    "fold",
    "counts",
    "boundary_word",
    "is_one_regular",
]

OUTER = 0


class InvalidCertificate(ValueError):
    pass


@dataclass(frozen=True)
class CellCounts:
    v: int
    e: int
    f: int

    @property
    def euler(self) -> int:
        return self.v - self.e + self.f

    def as_tuple(self) -> tuple[int, int, int]:
        return self.v, self.e, self.f


@dataclass
class Diagram:
    vertices: set[int] = field(default_factory=set)
    origin: dict[int, int] = field(default_factory=dict)
    twin: dict[int, int] = field(default_factory=dict)
    nxt: dict[int, int] = field(default_factory=dict)
    prev: dict[int, int] = field(default_factory=dict)
    label: dict[int, str] = field(default_factory=dict)
    face: dict[int, int] = field(default_factory=dict)
    # interior face id -> (relator, sign)
    faces: dict[int, tuple[str, int]] = field(default_factory=dict)
    # outer half-edge where the boundary word starts; None when there are no edges
    start: int | None = None
    base: int = 0

    def copy(self) -> "Diagram":
        return Diagram(
            set(self.vertices),
            dict(self.origin),
            dict(self.twin),
            dict(self.nxt),
            dict(self.prev),
            dict(self.label),
            dict(self.face),
            dict(self.faces),
            self.start,
            self.base,
        )

    # reads -----------------------------------------------------------------

    def dest(self, h: int) -> int:
        return self.origin[self.twin[h]]

    def cycle(self, h: int) -> list[int]:
        out = [h]
        x = self.nxt[h]
        while x != h:
            out.append(x)
            x = self.nxt[x]
        return out

    def counts(self) -> CellCounts:
        return CellCounts(len(self.vertices), len(self.origin) // 2, len(self.faces))

    def boundary_word(self) -> str:
        if self.start is None:
            return ""
        return "".join(self.label[h] for h in self.cycle(self.start))

    def face_word(self, f: int) -> str:
        hs = [h for h, g in self.face.items() if g == f]
        return "".join(self.label[h] for h in self.cycle(min(hs))) if hs else ""

    def edges(self) -> list[int]:
        """One half-edge per edge: the smaller id."""
        return sorted(h for h, t in self.twin.items() if h < t)

    def check(self) -> None:
        """Raise AssertionError if a structural invariant fails."""
        for h, t in self.twin.items():
            assert self.twin[t] == h and t != h
            assert self.label[t] == self.label[h].swapcase()
            assert self.prev[self.nxt[h]] == h
            assert self.origin[self.nxt[h]] == self.dest(h)
            assert self.face[self.nxt[h]] == self.face[h]
        assert self.counts().euler == 1, self.counts()
        if self.start is not None:
            assert self.face[self.start] == OUTER


def counts(d: Diagram) -> CellCounts:
    return d.counts()


def boundary_word(d: Diagram) -> str:
    return d.boundary_word()


# ---------------------------------------------------------------------------
# construction


class _Builder:
    def __init__(self):
        self.d = Diagram(vertices={0})
        self.next_id = 0
        self.next_vertex = 1

    def vertex(self) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.d.vertices.add(v)
        return v

    def edge(self, u: int, v: int, x: str, outer_face: int, inner_face: int) -> tuple[int, int]:
        h, t = self.next_id, self.next_id + 1
        self.next_id += 2
        d = self.d
        d.origin[h], d.origin[t] = u, v
        d.twin[h], d.twin[t] = t, h
        d.label[h], d.label[t] = x, x.swapcase()
        d.face[h], d.face[t] = outer_face, inner_face
        return h, t


def _link(d: Diagram, cycle: list[int]) -> None:
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        d.nxt[a] = b
        d.prev[b] = a


def from_certificate(c: Certificate) -> Diagram:
    """Wedge of lollipops: one stem and one relator loop per factor at a common base."""
    try:
        ok = verify(c)
    except ValueError as exc:
        raise InvalidCertificate(str(exc)) from exc
    if not ok:
        raise InvalidCertificate("certificate product does not equal its word")
    b = _Builder()
    d = b.d
    outer: list[int] = []
    for j, f in enumerate(c.factors, start=1):
        r = f.relator if f.sign > 0 else invert(f.relator)
        u = 0
        stem = []
        for x in f.conj:
            v = b.vertex()
            stem.append(b.edge(u, v, x, OUTER, OUTER))
            u = v
        top = u
        loop = []
        for k, x in enumerate(r):
            v = top if k == len(r) - 1 else b.vertex()
            loop.append(b.edge(u, v, x, OUTER, j))
            u = v
        d.faces[j] = (f.relator, f.sign)
        outer += [h for h, _ in stem] + [h for h, _ in loop] + [t for _, t in reversed(stem)]
        _link(d, [t for _, t in reversed(loop)])
    if outer:
        _link(d, outer)
        d.start = outer[0]
    return d


# ---------------------------------------------------------------------------
# surgery helpers


def _rot(d: Diagram, x: int) -> int:
    """Next outgoing half-edge around the origin of ``x``."""
    return d.nxt[d.twin[x]]


def _region(d: Diagram, p: int, q: int, walls: set[int], allow_vertices: bool) -> dict[int, int] | None:
    """Faces on the side of the closed path ``p q`` where the faces of ``p`` and ``q`` lie.

    ``p`` runs u -> v and ``q`` runs v -> u; ``walls`` holds the four
    half-edges of the two path edges.  Returns a map from each face to one of
    its half-edges, or None if the region reaches the outer face, or a vertex
    other than u, v when ``allow_vertices`` is false.  Interior faces are
    single boundary cycles, so each face is walked from its representative.
    """
    u, v = d.origin[p], d.origin[q]
    seen: dict[int, int] = {d.face[p]: p, d.face[q]: q}
    # corners at v from p to q and at u from q to p
    for incoming, outgoing in ((p, q), (q, p)):
        x = d.nxt[incoming]
        guard = 0
        while x != outgoing:
            seen.setdefault(d.face[d.twin[x]], d.twin[x])
            x = _rot(d, x)
            guard += 1
            if guard > len(d.origin):
                return None
    if OUTER in seen:
        return None
    queue = deque(seen.items())
    visited_vertices: set[int] = set()
    while queue:
        f, rep = queue.popleft()
        for h in d.cycle(rep):
            o = d.origin[h]
            if o not in (u, v):
                if not allow_vertices:
                    return None
                if o not in visited_vertices:
                    visited_vertices.add(o)
                    # every corner at an interior vertex belongs to the region
                    x = h
                    while True:
                        t = d.twin[x]
                        g = d.face[t]
                        if g == OUTER:
                            return None
                        if g not in seen:
                            seen[g] = t
                            queue.append((g, t))
                        x = _rot(d, x)
                        if x == h:
                            break
            if h in walls:
                continue
            t = d.twin[h]
            g = d.face[t]
            if g == OUTER:
                return None
            if g not in seen:
                seen[g] = t
                queue.append((g, t))
    return seen


def _delete_region(d: Diagram, region: dict[int, int], u: int, v: int) -> None:
    doomed = [h for rep in region.values() for h in d.cycle(rep)]
    keep_vertices = {u, v}
    for h in doomed:
        o = d.origin.pop(h)
        if o not in keep_vertices:
            d.vertices.discard(o)
        del d.twin[h], d.label[h], d.face[h]
    for h in doomed:
        del d.nxt[h], d.prev[h]
    for f in region:
        d.faces.pop(f, None)


def _glue(d: Diagram, a: int, b: int) -> None:
    """Make the surviving halves ``a`` and ``b`` of two identified edges twins."""
    d.twin[a] = b
    d.twin[b] = a


def _bigon_region(d: Diagram, h1: int, h2: int, allow_vertices: bool):
    """``(p, q, region)`` for a removable disc bounded by ``h1`` and ``h2``, or None."""
    for p, q in ((h1, d.twin[h2]), (h2, d.twin[h1])):
        walls = {h1, h2, d.twin[h1], d.twin[h2]}
        region = _region(d, p, q, walls, allow_vertices)
        if region is None:
            continue
        if d.face[d.twin[p]] in region or d.face[d.twin[q]] in region:
            continue
        return p, q, region
    return None


def _bigon_reduction(d: Diagram, h1: int, h2: int, allow_vertices: bool) -> bool:
    """Identify edges ``h1`` and ``h2`` (both u -> v, same label) if they bound a removable disc."""
    found = _bigon_region(d, h1, h2, allow_vertices)
    if found is None:
        return False
    p, q, region = found
    a, b = d.twin[p], d.twin[q]
    _delete_region(d, region, d.origin[p], d.origin[q])
    _glue(d, a, b)
    return True


def _boundary_fold(d: Diagram, h1: int) -> bool:
    """Fold the outer corner ``h1 -> next(h1)`` whose labels cancel."""
    h2 = d.nxt[h1]
    if h2 == d.start or d.label[h2] != d.label[h1].swapcase():
        return False
    t1, t2 = d.twin[h1], d.twin[h2]
    u, v, w = d.origin[h1], d.origin[h2], d.dest(h2)
    if h2 == t1:
        # spur: v is a leaf
        p, n = d.prev[h1], d.nxt[h2]
        for h in (h1, h2):
            del d.origin[h], d.twin[h], d.nxt[h], d.prev[h], d.label[h], d.face[h]
        d.vertices.discard(v)
        if p == h2:
            d.start = None
        else:
            d.nxt[p], d.prev[n] = n, p
            if d.start == h1:
                d.start = n
        return True
    if u != w:
        p, n = d.prev[h1], d.nxt[h2]
        x = t2
        while True:
            d.origin[x] = u
            x = _rot(d, x)
            if x == t2:
                break
        d.vertices.discard(w)
        if d.base == w:
            d.base = u
        for h in (h1, h2):
            del d.origin[h], d.twin[h], d.nxt[h], d.prev[h], d.label[h], d.face[h]
        if p == h2:
            d.start = None
        else:
            d.nxt[p], d.prev[n] = n, p
            if d.start == h1:
                d.start = n
        _glue(d, t1, t2)
        return True
    # u == w: the loop h1 h2 encloses a disc; cut it away and leave a spur
    if u == v:
        return False
    walls = {h1, h2, t1, t2}
    region = _region(d, t2, t1, walls, allow_vertices=True)
    if region is None:
        return False
    _delete_region(d, region, u, v)
    _glue(d, h1, h2)
    return True


def _boundary_candidates(d: Diagram) -> list[int]:
    if d.start is None:
        return []
    return [h for h in d.cycle(d.start) if d.nxt[h] != d.start and d.label[d.nxt[h]] == d.label[h].swapcase()]


def _bigon_candidates(d: Diagram) -> Iterable[tuple[int, int]]:
    groups: dict[tuple[int, int, str], list[int]] = {}
    for h, t in d.twin.items():
        u, v = d.origin[h], d.origin[t]
        if u == v or d.label[h].isupper():
            continue
        groups.setdefault((u, v, d.label[h]), []).append(h)
    for key in sorted(groups):
        hs = sorted(groups[key])
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                yield hs[i], hs[j]


def _find_bigon(d: Diagram) -> tuple[int, int] | None:
    """Lowest pair of edges bounding a vertex-free removable bigon."""
    best = None
    for h1, h2 in _bigon_candidates(d):
        key = (min(h1, d.twin[h1]), min(h2, d.twin[h2]))
        if best is not None and key >= best[0]:
            continue
        if _bigon_region(d, h1, h2, allow_vertices=False) is not None:
            best = (key, (h1, h2))
    return best[1] if best else None


def is_one_regular(d: Diagram) -> bool:
    """True when no edge pair bounds a vertex-free bigon."""
    for h1, h2 in _bigon_candidates(d):
        if _bigon_region(d, h1, h2, allow_vertices=False) is not None:
            return False
    return True


def fold(d: Diagram, check: bool = False) -> Diagram:
    """Fold cancelling boundary corners and 1-reduce bigons until neither applies.

    Moves are taken lowest half-edge id first.  The free reduction of the
    boundary word is preserved and no cell count increases.
    """
    d = d.copy()
    while True:
        heap = _boundary_candidates(d)
        heapq.heapify(heap)
        progressed = False
        while heap:
            h = heapq.heappop(heap)
            if h not in d.nxt or d.face[h] != OUTER:
                continue
            before = d.prev.get(h)
            if _boundary_fold(d, h):
                progressed = True
                if check:
                    d.check()
                # only corners next to the fold can have become foldable
                for x in (before, h if h in d.nxt else None):
                    if x is not None and x in d.nxt and d.face[x] == OUTER:
                        for y in (d.prev[x], x):
                            if d.nxt[y] != d.start and d.label[d.nxt[y]] == d.label[y].swapcase():
                                heapq.heappush(heap, y)
        pair = _find_bigon(d)
        if pair is not None:
            _bigon_reduction(d, *pair, allow_vertices=False)
            if check:
                d.check()
            continue
        if not progressed:
            return d
