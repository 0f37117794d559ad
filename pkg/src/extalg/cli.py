"""Command-line entry point: ``extalg <verb> ...``.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for usage or input errors (unknown names, unreadable files, bad syntax).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import Algebra, specialize, table_text
from .catalog import (Catalog, CatalogError, UnknownName, algebra_json, load_catalog, verify_catalog,
                      SECTIONS)
from .cohomology import CocycleError, PreconditionError, central_extension, cohomology, parse_form
from .degeneration import (DegenerationRow, ParametricBasis, closed_set_basis_search,
                           verify_degeneration_row)
from .identity import check_closed_set, check_identity, identity_names, parse_identity, resolve_identities
from .invariants import ff_iso_evidence, invariant_vector
from .parser import ParseError, parse_scalar
from .scalars import to_text


class UsageError(Exception):
    pass


def _catalog(args) -> Catalog:
    return load_catalog(args.catalog)


def _algebra(cat: Catalog, name: str, alpha: str | None) -> Algebra:
    A = cat.resolve(name)
    if alpha is not None:
        A = specialize(A, {"a": parse_scalar(alpha)})
    return A


def _instances(cat: Catalog, name: str, alpha: str | None) -> list[tuple[str, Algebra]]:
    """One algebra, or every catalog sample when a parametric entry gets no ``--alpha``."""
    A = _algebra(cat, name, alpha)
    if not A.parameters:
        return [(name, A)]
    entry = cat.entries.get(name)
    if entry is None or not entry.alpha_samples:
        raise UsageError(f"{name} depends on a; pass --alpha")
    return entry.instances()


def _read_or_inline(text: str) -> str:
    p = Path(text)
    return p.read_text() if p.is_file() else text


def _identities(text: str):
    if text in identity_names():
        return resolve_identities(text)
    return [parse_identity(_read_or_inline(text).strip())]


def cmd_check_identity(args) -> int:
    cat = _catalog(args)
    ok = True
    for label, A in _instances(cat, args.algebra, args.alpha):
        for ident in _identities(args.identity):
            res = check_identity(A, ident)
            name = ident.name or str(ident)
            if res:
                print(f"{label}: {name}: Holds")
            else:
                ok = False
                w = ",".join(f"e{i}" for i in res.witness)
                print(f"{label}: {name}: Fails at ({w}) with value ({', '.join(to_text(x) for x in res.value)})")
    return 0 if ok else 1


def cmd_invariants(args) -> int:
    cat = _catalog(args)
    for label, A in _instances(cat, args.algebra, args.alpha):
        v = invariant_vector(A)
        print(f"{label}: {table_text(A) or 'zero product'}")
        for key, value in vars(v).items():
            print(f"  {key} = {value}")
    return 0


def cmd_cohomology(args) -> int:
    cat = _catalog(args)
    ok = True
    for label, A in _instances(cat, args.algebra, args.alpha):
        try:
            rep = cohomology(A, args.identity)
        except PreconditionError as exc:
            print(f"{label}: {exc}")
            ok = False
            continue
        d = rep.as_dict(A.dim)
        print(f"{label}:")
        print(f"  Z2 = <{', '.join(d['Z2'])}>")
        print(f"  B2 = <{', '.join(d['B2'])}>")
        print(f"  H2 = <{', '.join(d['H2'])}>  (dim {d['H2_dim']})")
    return 0 if ok else 1


def cmd_extend(args) -> int:
    cat = _catalog(args)
    A = _algebra(cat, args.algebra, args.alpha)
    lines = [ln.strip() for ln in _read_or_inline(args.cocycle).splitlines() if ln.strip()]
    thetas = [parse_form(ln, A.dim) for ln in lines]
    try:
        ext = central_extension(A, thetas, args.identity)
    except CocycleError as exc:
        print(f"not a cocycle: {exc}")
        return 1
    name = args.name or f"{args.algebra}_ext"
    payload = json.dumps({"algebras": [algebra_json(ext, name)]}, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(payload)
        print(f"{name}: {table_text(ext)}  (written to {args.out})")
    else:
        print(f"{name}: {table_text(ext)}")
        print(payload, end="")
    return 0


def cmd_degenerate(args) -> int:
    cat = _catalog(args)
    if args.row:
        row = cat.row(args.row)
    else:
        if not (args.source and args.target and args.basis):
            raise UsageError("give --row, or all of --source, --target and --basis")
        basis = json.loads(_read_or_inline(args.basis))
        row = DegenerationRow("custom", args.source, args.target, ParametricBasis(basis))
    samples = [parse_scalar(a) for a in args.alpha] if args.alpha else None
    res = verify_degeneration_row(row, cat.resolve, samples)
    print(f"{row.name}: {'Verified' if res.verified else 'Failed'} ({res.mode})")
    for d in res.details:
        if d:
            print(f"  {json.dumps(d, default=str)}")
    return 0 if res.verified else 1


def cmd_closed_set(args) -> int:
    cat = _catalog(args)
    cs = cat.closed_set(args.set)
    ok = True
    for label, A in _instances(cat, args.algebra, args.alpha):
        holds = check_closed_set(A, cs.conditions)
        print(f"{label}: stored basis {'satisfies' if holds else 'violates'} {cs.name}")
        if args.search is not None and not holds:
            res = closed_set_basis_search(A, cs.conditions, args.search, args.seed, args.jobs)
            if res:
                print(f"  BasisFound at trial {res.trial}: {[[to_text(x) for x in r] for r in res.matrix]}")
            else:
                print(f"  NoBasisFound after {res.trials} trials, seed {res.seed} ({res.label})")
            holds = bool(res)
        ok &= holds
    return 0 if ok else 1


def cmd_iso_evidence(args) -> int:
    cat = _catalog(args)
    A, B = cat.resolve(args.a), cat.resolve(args.b)
    res = ff_iso_evidence(A, B, args.prime)
    if res:
        print(f"IsoWitness mod {res.prime}: {[[int(x) for x in r] for r in res.matrix]}")
    else:
        print(f"NoneFoundModP p={res.prime} after {res.searched} partial bases")
    print(f"  ({res.caveat})")
    return 0


def cmd_verify_all(args) -> int:
    cat = _catalog(args)
    report = verify_catalog(cat, seed=args.seed, jobs=args.jobs, trials=args.trials,
                            only=args.only or None)
    out = report.to_json() if args.format == "json" else report.to_text()
    if getattr(args, "out", None):
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0 if report.ok else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extalg", description="Exact checks for nilpotent algebras.")
    p.add_argument("--catalog", default=None, help="catalog directory or file (default: $EXTALG_CATALOG or shipped)")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check-identity")
    s.add_argument("--algebra", required=True)
    s.add_argument("--identity", required=True, help="named identity, a file, or inline text")
    s.add_argument("--alpha")
    s.set_defaults(fn=cmd_check_identity)

    s = sub.add_parser("invariants")
    s.add_argument("--algebra", required=True)
    s.add_argument("--alpha")
    s.set_defaults(fn=cmd_invariants)

    s = sub.add_parser("cohomology")
    s.add_argument("--algebra", required=True)
    s.add_argument("--identity", default="right-alternative")
    s.add_argument("--alpha")
    s.set_defaults(fn=cmd_cohomology)

    s = sub.add_parser("extend")
    s.add_argument("--algebra", required=True)
    s.add_argument("--cocycle", required=True, help="file with one form per line, or inline 'D12+D21'")
    s.add_argument("--identity", default="right-alternative")
    s.add_argument("--alpha")
    s.add_argument("--name")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_extend)

    s = sub.add_parser("degenerate")
    s.add_argument("--row")
    s.add_argument("--source")
    s.add_argument("--target")
    s.add_argument("--basis", help="JSON file (or inline JSON) with the rows of the parametric basis")
    s.add_argument("--alpha", action="append", help="sample value for a; repeatable")
    s.set_defaults(fn=cmd_degenerate)

    s = sub.add_parser("closed-set")
    s.add_argument("--algebra", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--alpha")
    s.add_argument("--search", type=int, metavar="TRIALS")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_closed_set)

    s = sub.add_parser("iso-evidence")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--prime", type=int, required=True, choices=(2, 3, 5))
    s.set_defaults(fn=cmd_iso_evidence)

    for verb, fmt in (("verify-all", "text"), ("report", "json")):
        s = sub.add_parser(verb)
        s.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--trials", type=int, help="override the closed-set search budget")
        s.add_argument("--only", action="append", choices=[n for n, _ in SECTIONS])
        s.add_argument("--format", choices=("text", "json"), default=fmt)
        s.add_argument("--out")
        s.set_defaults(fn=cmd_verify_all)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except UnknownName as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (CatalogError, UsageError, ParseError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
