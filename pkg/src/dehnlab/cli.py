"""Command-line entry point.

Machine-readable results go to stdout (JSON, or CSV for sweeps); one-line
human summaries go to stderr.  Exit status: 0 success, 1 negative answer
(nontrivial word, failed verification, no certificate), 2 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, replace

from .certificates import (
    Certificate,
    ForeignRelator,
    cost_f1_bound,
    cost_f2,
    dump_certificate,
    h_star_tuple,
    load_certificate,
)
from .diagrams import fold, from_certificate, is_one_regular
from .presentations import (
    AbelianRank2,
    GammaLevel,
    GammaT,
    Lysenok,
    LysenokStar,
    Presentation,
    load_presentation,
)
from .words import UnknownGenerator, exponent_sum, validate

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    max_factors: int = 4
    conj_bound: int | None = None
    budget: int = 20_000
    state_budget: int = 200_000
    threads: int = 1
    seed: int = DEFAULT_SEED

    def check(self) -> "Config":
        for name in ("max_factors", "budget", "state_budget", "threads"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.conj_bound is not None and self.conj_bound < 1:
            raise UsageError("conj_bound must be positive")
        return self


def load_config(path: str | None) -> Config:
    cfg = Config()
    if path:
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(asdict(cfg))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = replace(cfg, **data)
    env = os.environ.get("DEHNLAB_THREADS")
    if env:
        try:
            cfg = replace(cfg, threads=int(env))
        except ValueError:
            raise UsageError(f"DEHNLAB_THREADS must be an integer, got {env!r}") from None
    return cfg.check()


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _note(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _word(p: Presentation, w: str) -> str:
    try:
        return validate(w, p.generators)
    except UnknownGenerator as e:
        raise UsageError(str(e)) from None


def _decide(p: Presentation, w: str, cfg: Config) -> tuple[bool | None, str]:
    """(answer, method); answer None when undecided within the search bounds."""
    fam = p.family
    if isinstance(fam, Lysenok):
        from .grigorchuk import is_trivial_gamma

        return is_trivial_gamma(w), "wreath recursion"
    if isinstance(fam, GammaT):
        from .hnn import is_trivial_gamma_t

        return is_trivial_gamma_t(w), "t-elimination"
    if isinstance(fam, GammaLevel) and fam.i == 1:
        from .grigorchuk import is_trivial_level1

        return is_trivial_level1(w), "amalgam normal form"
    if isinstance(fam, AbelianRank2):
        return all(exponent_sum(w, g) == 0 for g in p.generators), "exponent sums"
    from .estimator import NoCertWithin, l2_search

    try:
        l2_search(p, w, cfg.max_factors, cfg.conj_bound, cfg.state_budget)
        return True, "bounded certificate search"
    except NoCertWithin:
        return None, "bounded certificate search"


def cmd_solve(args, cfg: Config) -> int:
    p = load_presentation(args.presentation)
    w = _word(p, args.word)
    ans, method = _decide(p, w, cfg)
    _emit({"trivial": ans, "decided": ans is not None, "method": method})
    _note(f"{p.name}: {w!r} trivial={ans} ({method}) seed={cfg.seed}")
    return 0 if ans else 1


def _certificate(p: Presentation, w: str, target: str, cfg: Config) -> Certificate:
    fam = p.family
    if isinstance(fam, GammaT):
        from .hnn import decompose_gamma_t

        return decompose_gamma_t(w, cfg.budget)
    if isinstance(fam, Lysenok):
        from .grigorchuk import decompose, decompose_R

        if isinstance(fam, LysenokStar) or target == "rstar":
            return decompose(w, cfg.budget)
        return decompose_R(w, cfg.budget)
    from .estimator import l2_search

    return l2_search(p, w, cfg.max_factors, cfg.conj_bound, cfg.state_budget).certificate


def cmd_decompose(args, cfg: Config) -> int:
    from .estimator import NoCertWithin
    from .grigorchuk import NotTrivial

    name = args.presentation
    if name is None:
        name = "lysenok_star" if args.target == "rstar" else "lysenok"
    p = load_presentation(name)
    w = _word(p, args.word)
    try:
        cert = _certificate(p, w, args.target, cfg)
    except (NotTrivial, NoCertWithin) as e:
        _emit({"certificate": None, "reason": str(e)})
        _note(f"{p.name}: no certificate for {w!r}: {e}")
        return 1
    text = dump_certificate(cert, args.out)
    if args.out is None:
        sys.stdout.write(text + "\n")
    summary = f"{cert.presentation.name}: {len(cert.factors)} factors, cost_f2={cost_f2(cert)}"
    if cert.presentation.family.has_heights:
        summary += f", heights={list(h_star_tuple(cert))}, cost_f1_bound={cost_f1_bound(cert)}"
    _note(summary + f" seed={cfg.seed}")
    return 0


def cmd_verify(args, cfg: Config) -> int:
    from .certificates import verify

    cert = load_certificate(args.cert)
    try:
        ok = verify(cert)
        reason = "" if ok else "product does not reduce to the word"
    except ForeignRelator as e:
        ok, reason = False, str(e)
    _emit({"valid": ok, "factors": len(cert.factors), "reason": reason})
    _note(f"verify {args.cert}: {'ok' if ok else 'FAILED ' + reason}")
    return 0 if ok else 1


def cmd_diagram(args, cfg: Config) -> int:
    cert = load_certificate(args.cert)
    d = from_certificate(cert)
    if args.fold:
        d = fold(d)
    c = d.counts()
    out = {"boundary": d.boundary_word()}
    if args.stats:
        out.update({"v": c.v, "e": c.e, "f": c.f, "one_regular": is_one_regular(d)})
    _emit(out)
    _note(f"diagram {args.cert}: V={c.v} E={c.e} F={c.f} euler={c.euler}")
    return 0


def cmd_sweep(args, cfg: Config) -> int:
    from .estimator import dehn_sweep

    p = load_presentation(args.presentation)
    max_factors = args.max_factors
    rows = dehn_sweep(
        p,
        args.max_len,
        max_factors,
        args.conj_bound if args.conj_bound is not None else cfg.conj_bound,
        cfg.state_budget,
        cfg.threads,
    )
    cols = ["x", "f2_exact", "f1_upper", "f0_upper", "f1_lower_bracket", "words_examined", "flags"]
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    wr.writeheader()
    for r in rows:
        d = r.as_dict()
        d["f2_exact"] = "" if d["f2_exact"] is None else d["f2_exact"]
        d["f1_lower_bracket"] = "" if d["f1_lower_bracket"] is None else d["f1_lower_bracket"]
        wr.writerow(d)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    m = p.max_relator_length() if p.finite else None
    bad = [(r.x, b) for r in rows for b in r.check(m)]
    last = rows[-1] if rows else None
    _note(
        f"sweep {p.name} x<={args.max_len}: f2={last.f2_exact if last else None}"
        f" f1<={last.f1_upper if last else None} bracket violations={len(bad)}"
        f" threads={cfg.threads} seed={cfg.seed}"
    )
    return 0 if not bad else 1


def cmd_relators(args, cfg: Config) -> int:
    p = load_presentation(args.presentation)
    rels = p.enumerate_relators(args.max_len)
    _emit([{"word": r, "height": h} for r, h in rels])
    _note(f"{p.name}: {len(rels)} relators of length <= {args.max_len}")
    return 0


def cmd_audit(args, cfg: Config) -> int:
    if args.series == "gamma_t":
        from .hnn import audit_gamma_t_bounds

        rep = audit_gamma_t_bounds(args.max_x, cfg.budget, args.samples, cfg.seed)
        if not args.rows:
            rep = {k: v for k, v in rep.items() if k != "rows"}
        _emit(rep)
        ok = rep["violations"] == 0 and rep["all_verified"]
        _note(f"audit gamma_t x<={args.max_x}: violations={rep['violations']} seed={cfg.seed}")
        return 0 if ok else 1
    from .grigorchuk import audit_gamma_bounds

    rep = audit_gamma_bounds(args.max_x, cfg.budget, args.series)
    rep["seed"] = cfg.seed
    _emit(rep)
    _note(
        f"audit {args.series} x<={args.max_x}: f2 constant={rep['fitted_f2_constant']:.3f}"
        f" f1 constant={rep['fitted_f1_constant']:.3f} verified={rep['all_verified']} seed={cfg.seed}"
    )
    return 0 if rep["all_verified"] and rep["height_support"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dehnlab", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file with default budgets")
    ap.add_argument("--seed", type=int, help="RNG seed for sampled audits")
    ap.add_argument("--budget", type=int, help="search budget for certificate construction")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide triviality of a word")
    s.add_argument("--presentation", default="lysenok")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("decompose", help="certificate for a trivial word")
    s.add_argument("--presentation", help="defaults to the Grigorchuk target")
    s.add_argument("--word", required=True)
    s.add_argument("--target", choices=("rstar", "r"), default="rstar")
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="check a certificate file")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("diagram", help="diagram of a certificate")
    s.add_argument("--cert", required=True)
    s.add_argument("--fold", action="store_true")
    s.add_argument("--stats", action="store_true")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("sweep", help="Dehn-function rows over all short words")
    s.add_argument("--presentation", required=True)
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--max-factors", type=int)
    s.add_argument("--conj-bound", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("relators", help="list relators up to a length")
    s.add_argument("--presentation", required=True)
    s.add_argument("--max-len", type=int, default=32)
    s.set_defaults(func=cmd_relators)

    s = sub.add_parser("audit", help="empirical bound audits")
    s.add_argument("--series", choices=("relators", "exhaustive", "gamma_t"), default="exhaustive")
    s.add_argument("--max-x", type=int, default=8)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--rows", action="store_true", help="include per-word rows")
    s.set_defaults(func=cmd_audit)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.budget is not None:
            cfg = replace(cfg, budget=args.budget)
        if getattr(args, "max_factors", None) is not None and args.command != "sweep":
            cfg = replace(cfg, max_factors=args.max_factors)
        cfg.check()
        return args.func(args, cfg)
    except (UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        _note(f"error: {e}")
        return 2
    except RuntimeError as e:
        # budget exhaustion in any search
        _note(f"error: {e}")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
