"""Command-line interface: ``braidmon <command> ...``.

Exit codes: 0 success / check passed, 1 check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bands
from .bands import PunctureConfig
from .dataset import default_bindings, load_bundle, read_document
from .dsl import Document, DSLSyntaxError, ResolveError, Stub, SymbolRef, resolve, serialize_document
from .factorization import (
    Factorization,
    StubError,
    StubFactor,
    check_full_twist,
    degree_report,
)
from .fp_group import (
    FpPresentation,
    abelianize,
    reidemeister_schreier,
    tietze_simplify,
    todd_coxeter,
)
from .invariants import BranchData, NonIntegralError, all_invariants
from .vankampen import GPresentation, invariance_orbit, presentation_from_factorization
from .words import GWord

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(out, records: list[dict] | None, text: str | None, fmt: str) -> None:
    if fmt == "records":
        for rec in records or []:
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


# --- document helpers -------------------------------------------------------------

def _read_documents(paths: list[str]) -> Document:
    merged = Document()
    for p in paths:
        try:
            doc = read_document(p)
        except DSLSyntaxError as err:
            raise InputError(f"{p}: {err}") from None
        except OSError as err:
            raise InputError(f"{p}: {err.strerror}") from None
        merged.lets.update(doc.lets)
        merged.factorizations.update(doc.factorizations)
    return merged


def _referenced(e, acc: set) -> None:
    if isinstance(e, SymbolRef):
        acc.add(e.name)
    for attr in ("children",):
        for c in getattr(e, attr, ()) or ():
            _referenced(c, acc)
    for attr in ("base", "conjugator", "template"):
        sub = getattr(e, attr, None)
        if sub is not None:
            _referenced(sub, acc)


def _targets(doc: Document, symbol: str | None) -> list[str]:
    """Names to resolve: the requested symbol, else every ``factorization``,
    else every ``let`` not used inside another definition."""
    if symbol:
        if symbol not in doc.lets and symbol not in doc.factorizations:
            raise InputError(f"no definition named {symbol}")
        return [symbol]
    if doc.factorizations:
        return list(doc.factorizations)
    used: set = set()
    for e in doc.lets.values():
        _referenced(e, used)
    # an indexed reference such as D_t uses every D_<k>
    return [n for n in doc.lets
            if n not in used and not any(n.startswith(u + "_") for u in used)
            and not isinstance(doc.lets[n], Stub)]


def _bindings(specs: list[str]) -> dict:
    b = default_bindings()
    for s in specs:
        name, _, deg = s.partition("=")
        try:
            b[name.strip()] = Stub(int(deg))
        except ValueError:
            raise InputError(f"bad --stub {s!r} (use NAME=DEGREE)") from None
    return b


def _resolve_parts(doc: Document, names: list[str], cfg: PunctureConfig,
                   bindings: dict) -> list[tuple[str, Factorization]]:
    parts = []
    for name in names:
        expr = doc.factorizations.get(name, doc.lets.get(name))
        try:
            parts.append((name, resolve(expr, cfg, doc.lets, bindings, origin=(name,))))
        except (ResolveError, ValueError) as err:
            raise InputError(f"{name}: {err}") from None
    return parts


def _config(name: str) -> PunctureConfig:
    try:
        return PunctureConfig.from_name(name)
    except ValueError as err:
        raise InputError(str(err)) from None


# --- commands --------------------------------------------------------------------

def cmd_parse(args, out) -> int:
    doc = _read_documents(args.files)
    if not doc.lets and not doc.factorizations:
        out.write("Id\n")
        return EXIT_OK
    out.write(serialize_document(doc))
    return EXIT_OK


def cmd_degree(args, out) -> int:
    if args.bundle:
        parts = list(load_bundle(_bindings(args.stub)))
        n = 54
    else:
        if not args.files:
            raise InputError("give input files or --bundle")
        cfg = _config(args.config)
        doc = _read_documents(args.files)
        parts = _resolve_parts(doc, _targets(doc, args.symbol), cfg, _bindings(args.stub))
        n = cfg.count
    grouping = {"parts": "none", "origin": "origin"}[args.grouping]
    report = degree_report(parts, grouping)
    if args.residual is not None:
        n = args.residual
    residual = n * (n - 1) - report.total
    recs = report.to_records() + [{"group": "*residual*", "strands": n, "residual": residual}]
    text = report.to_text() + f"\nresidual n={n}: {residual}"
    _emit(out, recs, text, args.format)
    return EXIT_OK


def cmd_check(args, out) -> int:
    cfg = _config(args.config)
    doc = _read_documents(args.files)
    parts = _resolve_parts(doc, _targets(doc, args.symbol), cfg, _bindings(args.stub))
    factors = tuple(f for _, p in parts for f in p.factors)
    fz = Factorization(cfg.count, factors)
    if fz.has_stubs():
        names = sorted({f.name for f in factors if isinstance(f, StubFactor)})
        raise InputError(
            f"refusing to check: stub factor(s) {', '.join(names)} have a declared degree "
            "but no braid; bind them to real factorizations")
    try:
        res = check_full_twist(fz)
    except StubError as err:
        raise InputError(str(err)) from None
    rec = {"ok": res.ok, "strands": cfg.count, "degree": fz.degree,
           "degree_delta": res.degree_delta, "first_divergence": res.first_divergence,
           "message": res.message}
    n = cfg.count
    text = f"{'PASS' if res.ok else 'FAIL'}: {res.message} (degree {fz.degree} of {n * (n - 1)})"
    _emit(out, [rec], text, args.format)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_vankampen(args, out) -> int:
    cfg = _config(args.config)
    doc = _read_documents(args.files) if args.files else Document()
    names = _targets(doc, args.symbol) if args.files else []
    parts = _resolve_parts(doc, names, cfg, _bindings(args.stub))
    factors = []
    for _, p in parts:
        for f in p.factors:
            if isinstance(f, StubFactor):
                if not args.omit_stubs:
                    raise InputError(f"{f.name} is a stub and carries no path data "
                                     "(use --omit-stubs to skip it)")
                print(f"note: omitted stub {f.name} (degree {f.declared_degree})", file=sys.stderr)
                continue
            factors.append(f)
    fz = Factorization(cfg.count, tuple(factors))
    try:
        pres = presentation_from_factorization(fz, cfg, args.mode, args.cusp_form)
    except ValueError as err:
        raise InputError(str(err)) from None
    rels = list(pres.relations)
    if args.orbit_bound:
        rels = invariance_orbit(rels, cfg, bound=args.orbit_bound)
        pres = GPresentation(pres.generators, tuple(rels))
    if args.format == "records":
        recs = [{"generators": list(pres.generators)}]
        recs += [{"kind": r.kind.value, "left": str(r.left), "right": str(r.right),
                  "origin": r.origin} for r in pres.relations]
        _emit(out, recs, None, "records")
    else:
        out.write(pres.to_text())
    return EXIT_OK


def _read_presentation(path: str) -> FpPresentation:
    try:
        g = GPresentation.from_text(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None
    except ValueError as err:
        raise InputError(f"{path}: {err}") from None
    return FpPresentation.from_relations(g.generators, g.relations)


def cmd_group(args, out) -> int:
    p = _read_presentation(args.file)
    try:
        subgroup = [GWord.parse(s) for s in args.subgroup]
    except ValueError as err:
        raise InputError(str(err)) from None
    for w in subgroup:
        if w.labels() - set(p.generators):
            raise InputError(f"subgroup generator {w} uses unknown generators")
    if args.action == "simplify":
        q = tietze_simplify(p, args.effort)
        _emit(out, [{"generators": list(q.generators), "relators": [str(r) for r in q.relators]}],
              q.to_text(), args.format)
    elif args.action == "abelianize":
        inv = abelianize(p)
        _emit(out, [{"free_rank": inv.free_rank, "torsion": list(inv.torsion)}],
              f"free rank {inv.free_rank}; torsion {list(inv.torsion)}; group {inv}", args.format)
    elif args.action == "tc":
        t = todd_coxeter(p, subgroup, args.coset_bound)
        if t.overflow:
            _emit(out, [{"overflow": True, "bound": t.bound}],
                  f"overflow: coset bound {t.bound} reached", args.format)
            return EXIT_FAIL
        _emit(out, [{"index": t.index}] + t.to_records(), f"index {t.index}", args.format)
    else:
        t = todd_coxeter(p, subgroup, args.coset_bound)
        if t.overflow:
            _emit(out, [{"overflow": True, "bound": t.bound}],
                  f"overflow: coset bound {t.bound} reached", args.format)
            return EXIT_FAIL
        q = reidemeister_schreier(p, t)
        if args.effort:
            q = tietze_simplify(q, args.effort)
        _emit(out, [{"index": t.index, "generators": list(q.generators),
                     "relators": [str(r) for r in q.relators]}],
              f"# index {t.index}\n" + q.to_text(), args.format)
    return EXIT_OK


def cmd_chern(args, out) -> int:
    try:
        b = BranchData(args.n, args.m, args.d, args.rho, args.mu)
        invs = all_invariants(b)
    except (ValueError, NonIntegralError) as err:
        raise InputError(str(err)) from None
    recs = [{"name": x.name, "coefficient": str(x.coefficient), "n": b.n, "value": str(x.value)}
            for x in invs]
    tau = invs[2]
    lines = [f"{x.name:<5} = {x.factored():<12} = {x.value}" for x in invs]
    lines.append("tau is " + {1: "positive", 0: "zero", -1: "negative"}[tau.sign])
    _emit(out, recs, "\n".join(lines), args.format)
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="braidmon",
        description="Braid monodromy factorizations: parsing, bookkeeping, verification, "
                    "van Kampen presentations and group computations.")
    def common(p, default):
        # accepted before or after the subcommand; the subcommand copy only
        # overrides when given explicitly
        p.add_argument("--side-convention", choices=("above", "below"), default=default,
                       help="which side of the real axis carries positive conjugator letters")
        p.add_argument("--format", choices=("text", "records"), default=default,
                       help="human-readable text or JSON line records")

    parser.set_defaults(side_convention="above", format="text")
    common(parser, argparse.SUPPRESS)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[shared], **kw)

    p = add("parse", help="parse factorization files and print them back")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_parse)

    def resolving(p, config_default):
        p.add_argument("files", nargs="*")
        p.add_argument("--config", default=config_default, help="54p, 12p, n=<k>, ...")
        p.add_argument("--symbol", help="resolve only this definition")
        p.add_argument("--stub", action="append", default=[], metavar="NAME=DEGREE",
                       help="declare a stub binding (F1hat=24 is the default)")

    p = add("degree", help="degree bookkeeping report")
    resolving(p, "54p")
    p.add_argument("--bundle", action="store_true", help="use the bundled full dataset")
    p.add_argument("--grouping", choices=("parts", "origin"), default="parts")
    p.add_argument("--residual", type=int, metavar="N", help="strand count for the residual")
    p.set_defaults(func=cmd_degree)

    p = add("check", help="verify that the product is the full twist")
    resolving(p, "54p")
    p.set_defaults(func=cmd_check)

    p = add("vankampen", help="emit the van Kampen presentation")
    resolving(p, "54p")
    p.add_argument("--mode", choices=("pi1", "quotient"), default="pi1")
    p.add_argument("--cusp-form", choices=("braid", "involutive"), default="braid")
    p.add_argument("--orbit-bound", type=int, default=0, metavar="K",
                   help="append the invariance orbit with |m_j| <= K")
    p.add_argument("--omit-stubs", action="store_true", help="skip stub factors")
    p.set_defaults(func=cmd_vankampen)

    p = add("group", help="computations on a presentation file (gen:/rel: format)")
    p.add_argument("action", choices=("simplify", "abelianize", "tc", "rs"))
    p.add_argument("file")
    p.add_argument("--subgroup", action="append", default=[], metavar="WORD",
                   help="subgroup generator (repeatable), e.g. 'a b^-1'")
    p.add_argument("--coset-bound", type=int, default=100_000)
    p.add_argument("--effort", type=int, default=20)
    p.set_defaults(func=cmd_group)

    p = add("chern", help="Chern numbers and index of the Galois cover")
    for name in ("n", "m", "d", "rho", "mu"):
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_chern)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    previous = bands.side_convention()
    bands.set_side_convention(args.side_convention)
    try:
        return args.func(args, out)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        bands.set_side_convention(previous)


if __name__ == "__main__":
    sys.exit(main())
