"""Brute-force Dehn-function estimates on small presentations.

``l2_exact`` finds the least number of relator factors needed for a word by
iterative deepening over cyclic words: one step removes a single relator
occurrence read at some boundary position.  Every certificate found is
returned together with the count.  Edge and vertex counts are upper bounds
taken from the folded diagram of that certificate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certificates import Certificate, Factor, verify
from .diagrams import fold, from_certificate
from .presentations import AbelianRank2, GammaLevel, Lysenok, Presentation
from .words import cyclic_reduce, exponent_sum, free_reduce, invert

__all__ = [
    "NoCertWithin",
    "BudgetExceeded",
    "InsufficientData",
    "L2Result",
    "SweepRow",
    "Searcher",
    "default_conj_bound",
    "l2_exact",
    "l2_search",
    "l1_upper",
    "l0_upper",
    "diagram_bounds",
    "reduced_words",
    "dehn_sweep",
    "growth_fit",
]

MAX_SWEEP_WORDS = 500_000


class NoCertWithin(Exception):
    """No certificate exists inside the declared bounds."""


class BudgetExceeded(RuntimeError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass
class L2Result:
    value: int
    certificate: Certificate
    max_factors: int
    conj_bound: int
    states: int
    # minimality is only claimed inside the bounds
    bounded: bool = True


def default_conj_bound(p: Presentation, w: str) -> int:
    """|w| plus the longest relator; |w| + max(8, |w|) for infinite families."""
    if p.finite:
        return len(w) + p.max_relator_length()
    return len(w) + max(8, len(w))


def _canonical(c: str) -> str:
    if not c:
        return c
    inv = invert(c)
    return min(min(c[k:] + c[:k] for k in range(len(c))), min(inv[k:] + inv[:k] for k in range(len(inv))))


def _abelian(w: str, gens: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(exponent_sum(w, g) for g in gens)


class Searcher:
    """Bounded shelling search for one presentation and one pair of bounds.

    States are cyclically reduced words of length at most ``conj_bound``;
    relators of length at most ``conj_bound`` are used.  Failed depths are
    memoized per canonical cyclic word, so one searcher can serve many
    words (a sweep) without repeating work.
    """

    def __init__(self, p: Presentation, conj_bound: int, budget: int = 200_000):
        self.p = p
        self.bound = conj_bound
        self.budget = budget
        self.states = 0
        self.failed: dict[str, int] = {}
        rels = [free_reduce(r) for r, _ in p.enumerate_relators(conj_bound)]
        self.relators = [r for r in dict.fromkeys(rels) if r and len(r) <= conj_bound]
        # rotation string -> (relator, sign, offset) with rotation = rr[k:] + rr[:k]
        self.table: dict[str, tuple[str, int, int]] = {}
        for r in self.relators:
            for e, rr in ((1, r), (-1, invert(r))):
                for k in range(len(rr)):
                    self.table.setdefault(rr[k:] + rr[:k], (r, e, k))
        # a removable face always shares an edge with the boundary, so only
        # rotations starting with the boundary letter need to be tried
        self.by_first: dict[str, list[str]] = {}
        for rot in sorted(self.table, key=lambda s: (len(s), s)):
            self.by_first.setdefault(rot[0], []).append(rot)
        self.max_rel = max((len(r) for r in self.relators), default=0)
        self._vectors = {_abelian(r, p.generators) for r in self.relators}
        self._reach: dict[int, set | None] = {0: {tuple(0 for _ in p.generators)}}

    def _reachable(self, d: int) -> set | None:
        if d in self._reach:
            return self._reach[d]
        prev = self._reachable(d - 1)
        if prev is None:
            self._reach[d] = None
            return None
        signed = self._vectors | {tuple(-x for x in v) for v in self._vectors}
        out = set(prev)
        for v in prev:
            for s in signed:
                out.add(tuple(a + b for a, b in zip(v, s)))
            if len(out) > 200_000:
                self._reach[d] = None
                return None
        self._reach[d] = out
        return out

    def _hopeless(self, c: str, d: int) -> bool:
        if len(c) > d * self.max_rel:
            return True
        reach = self._reachable(d)
        return reach is not None and _abelian(c, self.p.generators) not in reach

    def _factor(self, conj: str, rot: str) -> Factor:
        r, e, k = self.table[rot]
        rr = r if e == 1 else invert(r)
        return Factor(free_reduce(conj + invert(rr[:k])), r, e)

    def _dfs(self, c: str, z: str, d: int) -> list[Factor] | None:
        """Factors F with z c z^-1 = prod F, at most d of them, or None."""
        if not c:
            return []
        if d == 0:
            return None
        key = _canonical(c)
        if self.failed.get(key, -1) >= d:
            return None
        self.states += 1
        if self.states > self.budget:
            raise BudgetExceeded(f"state budget {self.budget} exhausted")
        if c in self.table:
            return [self._factor(z, c)]
        if d == 1 or self._hopeless(c, d):
            self.failed[key] = max(self.failed.get(key, -1), d)
            return None
        children = []
        seen = set()
        for k in range(len(c)):
            rot = c[k:] + c[:k]
            zk = z + c[:k]
            for rho in self.by_first.get(rot[0], ()):
                # rot = rho * (rho^-1 rot)
                core, cz = cyclic_reduce(invert(rho) + rot)
                if len(core) > self.bound:
                    continue
                ck = _canonical(core)
                if ck in seen or self.failed.get(ck, -1) >= d - 1:
                    continue
                seen.add(ck)
                children.append((len(core), len(children), core, zk, cz, rho))
        children.sort()
        for _, _, core, zk, cz, rho in children:
            sub = self._dfs(core, free_reduce(zk + cz), d - 1)
            if sub is not None:
                return [self._factor(zk, rho)] + sub
        self.failed[key] = max(self.failed.get(key, -1), d)
        return None

    def search(self, w: str, max_factors: int) -> tuple[int, list[Factor]]:
        w = free_reduce(w)
        c, z = cyclic_reduce(w)
        if len(c) > self.bound:
            raise NoCertWithin(f"|{c}| exceeds the bound {self.bound}")
        for depth in range(max_factors + 1):
            found = self._dfs(c, z, depth)
            if found is not None:
                return depth, found
        raise NoCertWithin(
            f"no certificate for {w!r} with <= {max_factors} factors within bound {self.bound}"
        )


def l2_search(
    p: Presentation,
    w: str,
    max_factors: int = 4,
    conj_bound: int | None = None,
    budget: int = 200_000,
    searcher: Searcher | None = None,
) -> L2Result:
    """Least factor count with a verifying certificate, inside the bounds."""
    w = free_reduce(w)
    bound = default_conj_bound(p, w) if conj_bound is None else conj_bound
    if searcher is None:
        searcher = Searcher(p, bound, budget)
    start = searcher.states
    n, factors = searcher.search(w, max_factors)
    cert = Certificate(w, p, tuple(factors))
    if not verify(cert):
        raise AssertionError(f"search produced a non-verifying certificate for {w!r}")
    return L2Result(n, cert, max_factors, bound, searcher.states - start)


def l2_exact(
    p: Presentation,
    w: str,
    max_factors: int = 4,
    conj_bound: int | None = None,
    budget: int = 200_000,
) -> int:
    return l2_search(p, w, max_factors, conj_bound, budget).value


def diagram_bounds(cert: Certificate) -> tuple[int, int, int]:
    """(vertices, edges, faces) of the folded diagram of ``cert``."""
    return fold(from_certificate(cert)).counts().as_tuple()


def l1_upper(p: Presentation, w: str, max_factors: int = 4, conj_bound: int | None = None,
             budget: int = 200_000) -> int:
    return diagram_bounds(l2_search(p, w, max_factors, conj_bound, budget).certificate)[1]


def l0_upper(p: Presentation, w: str, max_factors: int = 4, conj_bound: int | None = None,
             budget: int = 200_000) -> int:
    return diagram_bounds(l2_search(p, w, max_factors, conj_bound, budget).certificate)[0]


@dataclass
class SweepRow:
    x: int
    f2_exact: int | None
    f1_upper: int
    f0_upper: int
    f1_lower_bracket: int | None
    words_examined: int
    certified: int = 0
    flags: list[str] = field(default_factory=list)

    def check(self, max_rel: int | None) -> list[str]:
        """Bracket inequalities that fail on this row (empty when consistent)."""
        bad = []
        if self.f0_upper > 2 * self.f1_upper and self.f1_upper > 0:
            bad.append("f0_upper > 2*f1_upper")
        if self.f2_exact is not None and self.f2_exact > 2 * self.f1_upper:
            bad.append("f2 > 2*f1_upper")
        if max_rel is not None and self.f2_exact is not None:
            if self.f1_upper > max_rel * self.f2_exact + math.ceil(self.x / 2):
                bad.append("f1_upper > M*f2 + x/2")
        return bad

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "f2_exact": self.f2_exact,
            "f1_upper": self.f1_upper,
            "f0_upper": self.f0_upper,
            "f1_lower_bracket": self.f1_lower_bracket,
            "words_examined": self.words_examined,
            "certified": self.certified,
            "flags": ";".join(self.flags),
        }


def reduced_words(gens: tuple[str, ...], n: int):
    """All freely reduced words of length exactly n, in lexicographic letter order."""
    letters = [g for g in gens] + [g.upper() for g in gens]
    if n == 0:
        yield ""
        return
    for first in letters:
        stack = [(first,)]
        while stack:
            w = stack.pop()
            if len(w) == n:
                yield "".join(w)
                continue
            for x in reversed(letters):
                if x != w[-1].swapcase():
                    stack.append(w + (x,))


def _membership(p: Presentation):
    """Decision procedure for the normal closure, or None when unknown."""
    fam = p.family
    if isinstance(fam, AbelianRank2):
        return lambda w: all(exponent_sum(w, g) == 0 for g in p.generators)
    if isinstance(fam, Lysenok):
        from .grigorchuk import is_trivial_gamma

        return is_trivial_gamma
    if isinstance(fam, GammaLevel) and fam.i == 1:
        from .grigorchuk import is_trivial_level1

        return is_trivial_level1
    if fam.finite and not p.relators():
        return lambda w: free_reduce(w) == ""
    return None


def _necessary(p: Presentation):
    """A test every member passes (sound rejection of non-members), or None."""
    if isinstance(p.family, GammaLevel) and p.family.i > 1:
        from .grigorchuk import is_trivial_gamma

        # a truncation of the full relator set has a smaller normal closure
        return is_trivial_gamma
    return _membership(p)


def _sweep_chunk(args) -> list[tuple]:
    p, words, max_factors, bound, budget = args
    s = Searcher(p, bound, budget)
    member = _membership(p)
    necessary = _necessary(p)
    out = []
    for w in words:
        if necessary is not None and not necessary(w):
            out.append((len(w), None, 0, 0, ""))
            continue
        try:
            n, factors = s.search(w, max_factors)
        except NoCertWithin:
            miss = member is not None and member(w)
            out.append((len(w), None, 0, 0, "uncertified" if miss else ""))
            continue
        except BudgetExceeded:
            out.append((len(w), None, 0, 0, "budget"))
            s.states = 0
            continue
        s.states = 0
        v, e, _ = diagram_bounds(Certificate(w, p, tuple(factors)))
        out.append((len(w), n, e, v, ""))
    return out


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get("DEHNLAB_THREADS", "1")))
    except ValueError:
        return 1


def dehn_sweep(
    p: Presentation,
    x_max: int,
    max_factors: int | None = None,
    conj_bound: int | None = None,
    budget: int = 200_000,
    workers: int | None = None,
) -> list[SweepRow]:
    """Cumulative maxima of L2 and the fold bounds over all words of length <= x.

    A word counts when a certificate is found inside the bounds.  Rows are
    flagged when some search ran out of budget ("budget") or when a word
    known to be trivial got no certificate ("uncertified"); in both cases
    f2_exact is reported as unknown.
    """
    gens = p.generators
    total = sum(1 if n == 0 else 2 * len(gens) * (2 * len(gens) - 1) ** (n - 1) for n in range(x_max + 1))
    if total > MAX_SWEEP_WORDS:
        raise ValueError(f"{total} words up to length {x_max}; limit is {MAX_SWEEP_WORDS}")
    if max_factors is None:
        max_factors = x_max + 2
    bound = 2 * x_max if conj_bound is None else conj_bound
    if conj_bound is None and p.finite:
        bound = x_max + p.max_relator_length()
    words = [w for n in range(1, x_max + 1) for w in reduced_words(gens, n)]
    nw = _workers(workers)
    chunks = [words[i::nw] for i in range(nw)]
    tasks = [(p, ch, max_factors, bound, budget) for ch in chunks]
    if nw == 1:
        results = [_sweep_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(nw) as ex:
            results = list(ex.map(_sweep_chunk, tasks))
    per_len: dict[int, list[tuple]] = {n: [] for n in range(x_max + 1)}
    for res in results:
        for r in res:
            per_len[r[0]].append(r)
    rows = []
    # the empty word counts as certified with the zero diagram
    f2, f1, f0, examined, certified = 0, 0, 0, 1, 1
    flags: set[str] = set()
    unknown = False
    for x in range(1, x_max + 1):
        for _, n, e, v, flag in per_len[x]:
            examined += 1
            if flag:
                flags.add(flag)
                unknown = True
            if n is None:
                continue
            certified += 1
            f2, f1, f0 = max(f2, n), max(f1, e), max(f0, v)
        f2x = None if unknown else f2
        rows.append(
            SweepRow(
                x,
                f2x,
                f1,
                f0,
                None if f2x is None else math.ceil(f2x / 2),
                examined,
                certified,
                sorted(flags),
            )
        )
    return rows


def growth_fit(rows) -> dict:
    """Descriptive fits of f2 and f1 against x, x^2 and x^2 log x.

    Takes SweepRow objects or (x, f) pairs.  Reports the log-log slope and
    the model with the smallest log-space residual for each series.
    """
    series: dict[str, list[tuple[int, float]]] = {}
    for r in rows:
        if isinstance(r, SweepRow):
            if r.f2_exact is not None:
                series.setdefault("f2", []).append((r.x, r.f2_exact))
            series.setdefault("f1_upper", []).append((r.x, r.f1_upper))
        else:
            series.setdefault("f", []).append((r[0], r[1]))
    models = {
        "x": lambda x: x,
        "x^2": lambda x: x**2,
        "x^2 log x": lambda x: x**2 * np.log2(np.maximum(x, 2)),
    }
    report = {}
    for name, pts in series.items():
        pts = [(x, f) for x, f in pts if x >= 1 and f > 0]
        if len(pts) < 4:
            raise InsufficientData(f"{name}: need >= 4 positive rows, got {len(pts)}")
        x = np.array([p[0] for p in pts], dtype=float)
        f = np.array([p[1] for p in pts], dtype=float)
        lx, lf = np.log(x), np.log(f)
        if np.ptp(lf) == 0:
            report[name] = {"degenerate": True, "exponent": 0.0, "best": None, "residuals": {}}
            continue
        slope, _ = np.polyfit(lx, lf, 1)
        residuals = {}
        for m, g in models.items():
            d = lf - np.log(g(x))
            residuals[m] = float(np.mean((d - d.mean()) ** 2))
        report[name] = {
            "degenerate": False,
            "exponent": float(slope),
            "best": min(residuals, key=residuals.get),
            "residuals": residuals,
        }
    return report
