"""Command-line front end.

Exit status: 0 success (all checked properties hold), 1 some property fails,
2 bad input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import classify as cl
from . import constructions as co
from . import morphisms as mo
from .braided import (
    braiding_order,
    is_biquandle,
    is_dihedral,
    is_solution,
    is_triality,
    nondegeneracy_flags,
)
from .tables import LawId, MulTable, TableError, check_law, find_identity
from .tableio import NamedTable, ParseError, braided_from_tables, braided_to_text, format_tables, read_tables

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    budget: int
    fmt: str
    seed: int
    tolerance: float = 1e-9
    expected: Optional[str] = None

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# sources


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


def builtin_tables(spec: str) -> Optional[list[NamedTable]]:
    """``group:3,9``, ``bpq:5,3``, ``bp3:5``, ``l3`` or ``assoc27``; ``None`` for file paths."""
    kind, _, arg = spec.partition(":")
    if kind == "group" and arg:
        mods = _ints(arg)
        return [NamedTable("x".join(f"Z/{m}" for m in mods), co.abelian_group(mods).table)]
    if kind == "bpq" and arg:
        p, q = _ints(arg)
        return [NamedTable(f"B_{p}_{q}", co.build_bpq(p, q).table)]
    if kind == "bp3" and arg:
        (p,) = _ints(arg)
        return [NamedTable(f"B_{p}_3", co.build_bp3_condensed(p).table)]
    if spec == "l3":
        return [NamedTable("L3", co.build_l3().table)]
    if spec == "assoc27":
        return [NamedTable(name, loop.table) for name, loop in cl.associative_order27()]
    return None


def load_source(spec: str) -> list[NamedTable]:
    tables = builtin_tables(spec)
    if tables is not None:
        return tables
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"no such file or builtin: {spec}")
    tables = read_tables(path)
    if not tables:
        raise InputError(f"{spec}: no tables")
    return [NamedTable(t.name or (f"{path.stem}" if len(tables) == 1 else f"{path.stem}#{i}"), t.table)
            for i, t in enumerate(tables)]


# --------------------------------------------------------------------------
# output


def render(rows: list[list], header: list[str], fmt: str) -> str:
    if fmt == "tsv":
        return "\n".join("\t".join(str(c) for c in r) for r in [header] + rows) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    fmt_row = "  ".join(f"{{:<{w}}}" for w in widths)
    return "\n".join(fmt_row.format(*map(str, r)) for r in [header] + rows) + "\n"


def _verdict(name: str, failures) -> tuple[bool, str]:
    if not failures:
        return True, f"{name}: holds"
    first = failures[0]
    return False, f"{name}: VIOLATED {first.law} at {first.args}: {first.lhs} != {first.rhs}"


# --------------------------------------------------------------------------
# commands


def cmd_check(args, cfg: RunConfig) -> int:
    tables = load_source(args.source)
    b = braided_from_tables(tables)
    ok = True
    lines = []
    if b is not None:
        wanted = [k for k in ("solution", "dihedral", "triality", "latin", "biquandle", "nondegenerate")
                  if getattr(args, k)] or ["solution"]
        nd = nondegeneracy_flags(b)
        for k in wanted:
            if k == "solution":
                good, msg = _verdict(k, is_solution(b, args.cap))
            elif k == "dihedral":
                good, msg = _verdict(k, is_dihedral(b, args.cap))
            elif k == "triality":
                good, msg = _verdict(k, is_triality(b, args.cap))
            elif k == "latin":
                good = nd.latin
                msg = f"latin: {'holds' if good else 'VIOLATED ' + _latin_witness(b.circ)}"
            elif k == "nondegenerate":
                good = nd.left and nd.right
                msg = f"nondegenerate: left={nd.left} right={nd.right}"
            else:
                good = is_biquandle(b)
                msg = f"biquandle: {'holds' if good else 'VIOLATED'}"
            ok &= good
            lines.append(msg)
        if not args.laws:
            lines.append(f"order of r: {braiding_order(b).order}")
        targets = [("circ", b.circ)]
    else:
        targets = [(t.name, t.table) for t in tables]
        if args.latin or not args.laws:
            for name, t in targets:
                w = _latin_witness(t)
                ok &= not w
                lines.append(f"{name} latin: {'holds' if not w else 'VIOLATED ' + w}")
    for law_name in args.laws:
        try:
            law = LawId[law_name.upper()]
        except KeyError:
            raise InputError(f"unknown law {law_name}; known: {', '.join(l.name for l in LawId)}") from None
        for name, t in targets:
            good, msg = _verdict(f"{name} {law.name}", check_law(t, law, args.cap))
            ok &= good
            lines.append(msg)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATED


def _latin_witness(t: MulTable) -> str:
    for i, row in enumerate(t.t):
        if len(np.unique(row)) != t.n:
            return f"row {i} is not a permutation"
    for j, col in enumerate(t.t.T):
        if len(np.unique(col)) != t.n:
            return f"column {j} is not a permutation"
    return ""


def _construct(family: str, params: list[str], args) -> str:
    def ints(k=None):
        v = [int(x) for x in params]
        if k is not None and len(v) not in (k if isinstance(k, tuple) else (k,)):
            raise InputError(f"{family} takes {k} integer parameters")
        return v

    if family == "bpq":
        p, q = ints(2)
        omega = tuple(_ints(args.omega)) if args.omega else None
        return format_tables([(f"B_{p}_{q}", co.build_bpq(p, q, omega).table)])
    if family == "bp3":
        (p,) = ints(1)
        return format_tables([(f"B_{p}_3", co.build_bp3_condensed(p).table)])
    if family == "l3":
        return format_tables([("L3", co.build_l3().table)])
    if family == "group":
        mods = ints()
        return format_tables([("x".join(f"Z/{m}" for m in mods), co.abelian_group(mods).table)])
    if family == "lbds":
        if not params:
            raise InputError("lbds needs a kind: zp, bp3, l3, group")
        kind, rest = params[0], params[1:]
        if kind == "zp":
            n, sign = (int(v) for v in rest)
            d = co.zn_descriptor(n, sign)
        elif kind == "bp3":
            vals = [int(v) for v in rest]
            d = co.bp3_descriptor(*vals)
        elif kind == "l3":
            d = co.l3_descriptor(rest[0].upper())
        elif kind == "group":
            mods = [int(v) for v in rest]
            signs = _ints(args.signs) if args.signs else [1] * len(mods)
            d = co.signed_descriptor(mods, signs)
        else:
            raise InputError(f"unknown lbds kind {kind}")
        b, _ = co.lbds_from_descriptor(d)
        return braided_to_text(b)
    if family == "stock":
        if not params:
            raise InputError("stock needs a family name")
        name, rest = params[0], params[1:]
        kw = {}
        if rest:
            kw["n"] = int(rest[0])
        if args.moduli:
            kw["loop"] = co.abelian_group(_ints(args.moduli))
        return braided_to_text(co.stock_solutions(name, **kw))
    raise InputError(f"unknown family {family}")


def cmd_construct(args, cfg: RunConfig) -> int:
    text = _construct(args.family, args.params, args)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args, cfg: RunConfig) -> int:
    kind = args.kind
    if kind == "lbts":
        reports = list(cl.classify_lbts_upto_81(cfg.budget).values())
    else:
        if args.p is None:
            raise InputError(f"classify {kind} needs a prime")
        fn = {"p": cl.classify_order_p, "p2": cl.classify_order_p2, "3p": cl.classify_order_3p}[kind]
        reports = [fn(args.p, cfg.budget)]
    ok = True
    for rep in reports:
        rows = []
        for i, d in enumerate(rep.reps):
            fixed, negated = cl._spectrum(d)
            rows.append([i, d.name, d.n, fixed, negated])
        print(f"order {rep.order}: {rep.count} classes (published {rep.published_count})")
        sys.stdout.write(render(rows, ["#", "representative", "order", "S-fixed", "S-negated"], cfg.fmt))
        print(f"pairwise non-isomorphism certificates: {len(rep.certificates)}/{rep.count * (rep.count - 1) // 2}")
        for note in rep.notes:
            print(f"note: {note}")
        ok &= bool(rep.agrees_with_published) and rep.all_distinct
    return EXIT_OK if ok else EXIT_VIOLATED


def _loop_entries(sources: list[str]) -> list[tuple[str, MulTable]]:
    return [(t.name, t.table) for s in sources for t in load_source(s)]


def cmd_nci(args, cfg: RunConfig) -> int:
    rep = cl.catalog_report(_loop_entries(args.sources), None, cfg.budget)
    rows = [[r.name, r.n_ci] for r in rep.rows]
    sys.stdout.write(render(rows + [["total", rep.total]], ["loop", "n_CI"], cfg.fmt))
    return EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    expected = cl.load_expected(args.expected)
    rep = cl.catalog_report(_loop_entries(args.sources), expected, cfg.budget)
    rows = [[r.name, r.n_ci, "-" if r.expected is None else r.expected,
             {True: "match", False: "MISMATCH", None: "-"}[r.match]] for r in rep.rows]
    sys.stdout.write(render(rows, ["loop", "n_CI", "expected", "status"], cfg.fmt))
    print(f"total n_CI: {rep.total}")
    print(f"{rep.matched}/{rep.checked} match")
    if rep.missing:
        print(f"not ingested ({len(rep.missing)}): {' '.join(rep.missing)}")
        print(f"expected total {sum(expected.values())} not verifiable without those loops")
    return EXIT_OK if rep.matched == rep.checked else EXIT_VIOLATED


def cmd_search(args, cfg: RunConfig) -> int:
    found = cl.brute_force_solutions(args.n, latin=args.latin, dihedral=args.dihedral,
                                     triality=args.triality, derived=args.derived)
    print(f"{len(found)} classes")
    if args.output:
        text = "\n".join(braided_to_text(b) for b in found)
        Path(args.output).write_text(text)
    return EXIT_OK


def cmd_aut(args, cfg: RunConfig) -> int:
    (t, *rest) = load_source(args.source)
    e = find_identity(t.table)
    g = mo.automorphism_group(t.table, e, budget=cfg.budget)
    print(f"{t.name}: |Aut| = {g.order}")
    if e is not None:
        print(f"involution classes (n_CI): {len(mo.involution_classes(t.table, e, group=g, budget=cfg.budget))}")
    if args.output:
        perms = g.generators if args.generators else g.element_array()
        Path(args.output).write_text(mo.export_permutations(perms))
    return EXIT_OK


def cmd_householder(args, cfg: RunConfig) -> int:
    rep = co.householder_braiding_check(args.dim, args.trials, cfg.tolerance, cfg.seed)
    print(f"dim={rep.dim} trials={rep.trials} seed={cfg.seed}")
    print(f"braid residual (s_x(y), x): {rep.residual_first:.3e}")
    print(f"braid residual (s_x s_o(y), s_o(x)): {rep.residual_second:.3e}")
    print(f"H_v^2 residual: {rep.involution_residual:.3e}; H_v(v) residual: {rep.fixed_residual:.3e}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=mo.DEFAULT_BUDGET, help="search node budget")
    common.add_argument("--format", dest="fmt", choices=("plain", "markdown", "tsv"), default="plain")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="ybeloops", description="Braided sets, Bruck loops and LBDS classification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify laws or braided-set properties")
    p.add_argument("source")
    for flag in ("solution", "dihedral", "triality", "latin", "biquandle", "nondegenerate"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--law", dest="laws", action="append", default=[], help="named law, repeatable")
    p.add_argument("--cap", type=int, default=16)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", parents=[common], help="emit a table or braided set")
    p.add_argument("family", choices=("bpq", "bp3", "l3", "group", "lbds", "stock"))
    p.add_argument("params", nargs="*")
    p.add_argument("--omega", help="a,b for omega = a + b sqrt(t)")
    p.add_argument("--signs", help="diagonal of S for lbds group")
    p.add_argument("--moduli", help="loop for stock smith/cml_derived")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("classify", parents=[common], help="LBDS classes of order p, p^2, 3p or LBTS up to 81")
    p.add_argument("kind", choices=("p", "p2", "3p", "lbts"))
    p.add_argument("p", type=int, nargs="?")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nci", parents=[common], help="involution-class counts of loops")
    p.add_argument("sources", nargs="+")
    p.set_defaults(func=cmd_nci)

    p = sub.add_parser("report", parents=[common], help="n_CI per loop against expected counts")
    p.add_argument("sources", nargs="+")
    p.add_argument("--expected", required=True, help="file, or table1 / table2")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("search", parents=[common], help="exhaustive search for tiny orders")
    p.add_argument("n", type=int)
    for flag in ("latin", "dihedral", "triality", "derived"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("aut", parents=[common], help="automorphism group of a table")
    p.add_argument("source")
    p.add_argument("-o", "--output", help="write permutations, one per line")
    p.add_argument("--generators", action="store_true", help="export generators only")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("householder", parents=[common], help="numeric braid check for reflections")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_householder)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.budget, args.fmt, args.seed, getattr(args, "tol", 1e-9),
                        getattr(args, "expected", None))
        return args.func(args, cfg)
    except mo.SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except co.ToleranceExceeded as exc:
        print(f"violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    except (ParseError, TableError, co.ConstructionError, cl.InfeasibleSize, InputError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
