"""Command-line front end.

Exit status: 0 on success or a positive verdict, 1 when a check or
verification comes out negative, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .congruence import congruence_lattice, jir_congruence_poset
from .errors import SlimconError
from .order import Lattice, Poset, chain, crown, downset_lattice, fence_segment, grid
from .slimsm import PlanarSlimLattice, build_Ln
from .structures import FiniteStructure, GraphView, circle_graph, cyclic_group, is_bipartite

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

BUILD_KINDS = ("crown", "circle", "fence", "chain", "grid", "zn", "ln", "downset", "fd3")
CHECKS = (
    "bipartite",
    "two-cover",
    "bmep",
    "dcep",
    "cyclic",
    "multicyclic",
    "vw",
    "slim",
    "semimodular",
    "distributive",
)
VERIFY = ("theorem-a", "theorem-b", "theorem-c", "remark-18", "birkhoff", "congruence")


class UsageError(Exception):
    pass


# -- I/O -----------------------------------------------------------------------

def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def load(path: str):
    """Structure, poset, lattice or diagram stored in ``path`` ("-" for stdin)."""
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        if "coverOrder" in obj:
            return PlanarSlimLattice.from_json(obj)
        if "signature" in obj:
            return FiniteStructure.from_json(obj)
        if "size" in obj:
            p = Poset.from_json(obj)
            try:
                return Lattice(p.up, p.labels)
            except ValueError:
                return p
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: missing or malformed field {exc}") from None
    raise UsageError(f"{path}: unrecognised structure JSON")


def _emit(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _as_lattice(obj, what: str = "input") -> Lattice:
    if isinstance(obj, PlanarSlimLattice):
        return obj.lattice
    if isinstance(obj, Lattice):
        return obj
    raise UsageError(f"{what} is not a lattice")


def _as_structure(obj) -> FiniteStructure:
    if isinstance(obj, PlanarSlimLattice):
        return obj.lattice.to_structure()
    if isinstance(obj, Poset):
        return obj.to_structure()
    return obj


# -- subcommands ---------------------------------------------------------------

def cmd_build(args) -> int:
    n = args.n
    if args.kind in ("crown", "circle", "fence", "chain", "grid", "zn", "ln") and n is None:
        raise UsageError(f"build {args.kind} needs --n")
    if args.kind == "crown":
        obj = crown(n)
    elif args.kind == "circle":
        obj = circle_graph(n)
    elif args.kind == "fence":
        obj = fence_segment(n)
    elif args.kind == "chain":
        obj = chain(n)
    elif args.kind == "grid":
        obj = grid(n)
    elif args.kind == "zn":
        obj = cyclic_group(n)
    elif args.kind == "ln":
        obj = build_Ln(n)
    elif args.kind == "fd3":
        obj = downset_lattice(crown(3))
    else:
        if args.input is None:
            raise UsageError("build downset needs --in POSET.json")
        p = load(args.input)
        if isinstance(p, PlanarSlimLattice):
            p = p.lattice
        if not isinstance(p, Poset):
            raise UsageError("build downset needs a poset")
        obj = downset_lattice(p)
    _emit(obj.dumps(), args.out)
    return EXIT_OK


def _parse_assignment(text: str | None) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"bad assignment {part!r}; use name=value")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"bad value in assignment {part!r}") from None
    return out


def _parse_builtin(spec: str):
    from .folang import builtin

    name, sep, param = spec.partition(":")
    if not sep:
        return builtin(name)
    try:
        k = int(param)
    except ValueError:
        raise UsageError(f"builtin parameter must be an integer, got {param!r}") from None
    return builtin(name, k)


def cmd_eval(args) -> int:
    from .folang import Evaluator, parse, pretty

    s = _as_structure(load(args.input))
    f = parse(args.formula, s.signature) if args.formula is not None else _parse_builtin(args.builtin)
    value = Evaluator(s).holds(f, _parse_assignment(args.assign))
    _emit(_dump({"formula": pretty(f), "value": value}), args.out)
    return EXIT_OK if value else EXIT_NEGATIVE


def _check_report(prop: str, obj, args):
    from . import props

    if prop == "bipartite":
        if not isinstance(obj, GraphView):
            raise UsageError("check bipartite needs a graph")
        r = is_bipartite(obj, args.mode)
        if r.verdict:
            w = {"parts": [list(p) for p in r.parts]}
        elif r.odd_cycle is not None:
            w = {"odd_cycle": list(r.odd_cycle)}
        else:
            w = {"reason": r.reason}
        return props.PropertyReport("bipartite", r.verdict, w)
    lat = _as_lattice(obj)
    if prop in ("slim", "semimodular", "distributive"):
        return props.order_report(lat, prop)
    if prop == "two-cover":
        return props.has_two_cover(lat)
    if prop == "bmep":
        return props.has_bmep(lat, reading=args.reading, mode=args.mode)
    if prop == "dcep":
        return props.has_dcep(lat)
    return props.element_report(lat, prop, args.x)


def cmd_check(args) -> int:
    from .props import PropertyReport, recheck_witness

    obj = load(args.input)
    target = obj.lattice if isinstance(obj, PlanarSlimLattice) else obj
    if args.recheck_witness:
        report = PropertyReport.from_json(_read_json(args.recheck_witness))
        if report.property != args.property:
            raise UsageError(f"report is for {report.property!r}, not {args.property!r}")
        accepted = recheck_witness(target, report)
        _emit(_dump({"property": report.property, "verdict": report.verdict, "witness_accepted": accepted}), args.out)
        return EXIT_OK if accepted else EXIT_NEGATIVE
    report = _check_report(args.property, obj, args)
    _emit(report.dumps(), args.out)
    return EXIT_OK if report.verdict else EXIT_NEGATIVE


def cmd_con(args) -> int:
    lat = _as_lattice(load(args.input))
    obj = jir_congruence_poset(lat) if args.jir else congruence_lattice(lat)
    _emit(_dump(obj.to_json()), args.out)
    return EXIT_OK


def cmd_ln(args) -> int:
    d = build_Ln(args.n)
    _emit(d.to_dot() if args.dot else d.dumps(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import enumverify as ev

    common = {"workers": args.workers, "timings": args.timings}
    if args.suite == "theorem-a":
        run = ev.verify_theorem_A(args.count, args.seed, args.max_forks, max_grid=args.max_grid, **common)
    elif args.suite == "theorem-b":
        run = ev.verify_theorem_B(args.max_poset, **common)
    elif args.suite == "theorem-c":
        run = ev.verify_theorem_C(args.max_poset, **common)
    elif args.suite == "remark-18":
        run = ev.verify_remark_18(args.max_poset, **common)
    elif args.suite == "birkhoff":
        run = ev.verify_birkhoff(args.max_poset, **common)
    else:
        run = ev.verify_congruence_oracle(args.max_elements, **common)
    if args.out:
        _emit(run.dumps(results=not args.summary_only), args.out)
    sys.stdout.write(run.text() + "\n")
    return EXIT_OK if run.passed else EXIT_NEGATIVE


def cmd_export(args) -> int:
    obj = load(args.input)
    if not args.dot:
        _emit(obj.dumps(), args.out)
        return EXIT_OK
    if not hasattr(obj, "to_dot"):
        raise UsageError("only graphs, posets, lattices and diagrams export to DOT")
    _emit(obj.to_dot(), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slimcon", description="Finite lattices, congruences and first-order checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a named structure as JSON")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("--n", type=int)
    b.add_argument("--in", dest="input")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("eval", help="evaluate a formula on a structure")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula")
    src.add_argument("--builtin", help="name or name:k")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--assign", help="values of free variables, e.g. x=0,y=3")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="check a property and print a witness")
    c.add_argument("property", choices=CHECKS)
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--x", type=int, help="element for cyclic, multicyclic and vw")
    c.add_argument("--reading", choices=("graph", "cover"), default="graph")
    c.add_argument("--mode", choices=("standard", "strict"), default="standard")
    c.add_argument("--recheck-witness", metavar="REPORT", help="recheck the witness in a saved report")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("con", help="congruence lattice of a lattice")
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--jir", action="store_true", help="only the join-irreducible congruences")
    k.add_argument("--out")
    k.set_defaults(func=cmd_con)

    ln = sub.add_parser("ln", help="the slim semimodular lattice L_n")
    ln.add_argument("--n", type=int, required=True)
    ln.add_argument("--dot", action="store_true")
    ln.add_argument("--out")
    ln.set_defaults(func=cmd_ln)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=VERIFY)
    v.add_argument("--max-poset", type=_positive, default=6)
    v.add_argument("--max-elements", type=_positive, default=8)
    v.add_argument("--count", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-forks", type=int, default=6)
    v.add_argument("--max-grid", type=_positive, default=4)
    v.add_argument("--workers", type=_positive, default=1)
    v.add_argument("--timings", action="store_true", help="include wall time (breaks byte-identical output)")
    v.add_argument("--summary-only", action="store_true", help="omit per-lattice results from the JSON")
    v.add_argument("--out", help="write the full run as JSON")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("export", help="re-serialise a structure, or export DOT")
    x.add_argument("--dot", action="store_true")
    x.add_argument("--in", dest="input", required=True)
    x.add_argument("--out")
    x.set_defaults(func=cmd_export)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SlimconError, ValueError, OSError) as exc:
        print(f"slimcon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
