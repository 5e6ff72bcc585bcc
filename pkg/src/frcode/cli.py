"""``frcode`` command-line interface.

Exit status: 0 success, 1 validation failure, 2 work budget exceeded,
3 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds as bnd
from .constructions import (
    FIXTURES,
    GraphSpec,
    complete_graph_code,
    fixture,
    from_regular_graph,
    parse_database,
    petersen_graph,
)
from .hierarchy import (
    BudgetExceeded,
    default_budget,
    full_hierarchy,
    hierarchy_via_dual,
    staircase_from,
)
from .incidence import (
    FormatError,
    IncidenceStructure,
    RegularityReport,
    dual,
    is_simple,
    parse_text,
    to_text,
    validate_fr,
)
from .scenario import run_scenario

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def load_inputs(spec: str, lenient: bool = False) -> list[tuple[str, IncidenceStructure]]:
    """Resolve a fixture name or path; a database file yields one entry per record."""
    if not spec.startswith("./") and spec in FIXTURES:
        return [(spec, fixture(spec))]
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(f"{spec}: no such fixture or file (fixtures: {', '.join(FIXTURES)})")
    text = path.read_text(encoding="ascii")
    if any(line.startswith("# label:") for line in text.splitlines()):
        errors: list = []
        records = parse_database(text, lenient, errors)
        for e in errors:
            print(f"{spec}: skipped {e}", file=sys.stderr)
        return [(r.label, r.structure) for r in records]
    try:
        return [(spec, parse_text(text))]
    except FormatError as exc:
        raise FormatError(f"{spec}: {exc}") from exc


def resolve_one(spec: str) -> IncidenceStructure:
    items = load_inputs(spec)
    if len(items) != 1:
        raise FormatError(f"{spec}: expected a single structure, found {len(items)}")
    return items[0][1]


def parse_k(text: str | None, n: int) -> list[int]:
    if text is None:
        return list(range(1, n + 1))
    if ".." in text:
        lo, hi = text.split("..", 1)
        ks = list(range(int(lo), int(hi) + 1))
    else:
        ks = [int(text)]
    if not ks or ks[0] < 1 or ks[-1] > n:
        raise UsageError(f"--k {text} outside [1, {n}]")
    return ks


def _params_line(s: IncidenceStructure) -> str:
    res = validate_fr(s)
    if isinstance(res, RegularityReport):
        return f"n={s.num_blocks} v={s.num_points} {res}"
    n, alpha, v, rho = res.params
    return f"(n, alpha, v, rho) = ({n}, {alpha}, {v}, {rho})"


def _hierarchy_doc(s: IncidenceStructure, budget: int, workers: int) -> dict:
    h = full_hierarchy(s, budget, workers)
    st = staircase_from(h.n_vals, full_hierarchy(dual(s), budget, workers).n_vals)
    res = validate_fr(s)
    return {
        "n": s.num_blocks,
        "v": s.num_points,
        "params": None if isinstance(res, RegularityReport) else list(res.params),
        "m": list(h.m),
        "n_vals": list(h.n_vals),
        "n_vals_dual": list(st.n_dual),
        "pareto": [{"k0": p.k0, "l0": p.l0, "boundary": p.boundary} for p in st.points],
        "touching": [list(t) for t in st.touching],
    }


def _hierarchy_table(doc: dict, ks: list[int]) -> str:
    lines = ["k M_k N_k"]
    for k in ks:
        lines.append(f"{k} {doc['m'][k]} {doc['n_vals'][k]}")
    lines.append("# pareto k0 l0")
    for p in doc["pareto"]:
        lines.append(f"{p['k0']} {p['l0']}" + (" boundary" if p["boundary"] else ""))
    for k0, l0 in doc["touching"]:
        lines.append(f"{k0} {l0} touching")
    return "\n".join(lines) + "\n"


def _emit(label: str, many: bool, table: str) -> None:
    if many:
        print(f"# label: {label}")
    sys.stdout.write(table)


def cmd_hierarchy(args) -> int:
    items = load_inputs(args.input, args.lenient)
    docs = []
    for label, s in items:
        doc = _hierarchy_doc(s, args.budget, args.workers)
        ks = parse_k(args.k, s.num_blocks)
        doc["label"] = label
        docs.append(doc)
        if args.format == "table":
            _emit(label, len(items) > 1, _hierarchy_table(doc, ks))
    if args.format == "structured":
        print(json.dumps(docs if len(docs) > 1 else docs[0], indent=2))
    return EXIT_OK


def _bounds_for(s: IncidenceStructure, args) -> bnd.BoundReport:
    code = validate_fr(s)
    if isinstance(code, RegularityReport):
        raise UsageError(f"bounds need a regular FR code: {code}")
    ks = parse_k(args.k, code.n)
    exact = None
    if args.exact is not False:
        try:
            exact = full_hierarchy(s, args.budget, args.workers)
        except BudgetExceeded:
            if args.exact:
                raise
            print("exact column omitted: work budget exceeded", file=sys.stderr)
    return bnd.bound_report(code, ks, exact)


def cmd_bounds(args) -> int:
    if args.params:
        if args.input:
            raise UsageError("give either an input or --params, not both")
        p = bnd.FrParams.parse(args.params)
        reports = [("params", bnd.bound_report(p, parse_k(args.k, p.n)))]
    elif args.input:
        reports = [(label, _bounds_for(s, args)) for label, s in load_inputs(args.input, args.lenient)]
    else:
        raise UsageError("bounds needs an input or --params")
    if args.format == "structured":
        docs = [dict(r.to_dict(), label=label) for label, r in reports]
        print(json.dumps(docs if len(docs) > 1 else docs[0], indent=2))
        return EXIT_OK
    for label, r in reports:
        _emit(label, len(reports) > 1, r.to_table())
    return EXIT_OK


def cmd_analyze(args) -> int:
    items = load_inputs(args.input, args.lenient)
    out = []
    for label, s in items:
        doc = _hierarchy_doc(s, args.budget, args.workers)
        doc["label"] = label
        doc["simple"] = is_simple(s)
        report = None
        if doc["params"] is not None:
            exact = None if args.exact is False else doc["m"]
            report = bnd.bound_report(doc["params"], parse_k(args.k, s.num_blocks), exact)
        doc["bounds"] = report.to_dict() if report else None
        out.append(doc)
        if args.format == "table":
            _emit(label, len(items) > 1, _params_line(s) + "\n")
            print(f"simple: {'yes' if doc['simple'] else 'no'}")
            sys.stdout.write(_hierarchy_table(doc, parse_k(args.k, s.num_blocks)))
            if report:
                sys.stdout.write(report.to_table())
    if args.format == "structured":
        print(json.dumps(out if len(out) > 1 else out[0], indent=2))
    return EXIT_OK


def cmd_dual(args) -> int:
    items = load_inputs(args.input, args.lenient)
    for label, s in items:
        if len(items) > 1:
            print(f"# label: {label}")
        sys.stdout.write(to_text(dual(s)))
    return EXIT_OK


def cmd_verify(args) -> int:
    status = EXIT_OK
    items = load_inputs(args.input, args.lenient)
    for label, s in items:
        if len(items) > 1:
            print(f"# label: {label}")
        direct = full_hierarchy(s, args.budget, args.workers)
        via = hierarchy_via_dual(s, args.budget)
        for k in parse_k(args.k, s.num_blocks):
            ok = direct[k] == via[k]
            if not ok:
                status = EXIT_INVALID
            print(f"k={k} direct={direct[k]} via_dual={via[k]} {'PASS' if ok else 'FAIL'}")
    return status


def _edge_list(path: str) -> GraphSpec:
    edges, top = [], -1
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"{path}: expected 'u v'", lineno)
        a, b = int(parts[0]), int(parts[1])
        edges.append((a, b))
        top = max(top, a, b)
    return GraphSpec(top + 1, tuple(edges))


def cmd_construct(args) -> int:
    fam = args.family
    if fam == "complete-graph":
        if args.arg is None:
            raise UsageError("complete-graph needs T")
        s = complete_graph_code(int(args.arg)).structure
    elif fam == "petersen":
        s = from_regular_graph(petersen_graph()).structure
    elif fam == "graph":
        if args.arg is None:
            raise UsageError("graph needs an edge-list path")
        s = from_regular_graph(_edge_list(args.arg)).structure
    elif fam == "fixture":
        if args.arg not in FIXTURES:
            raise UsageError(f"unknown fixture {args.arg!r}; known: {', '.join(FIXTURES)}")
        s = fixture(args.arg)
    else:
        raise UsageError(f"unknown family {fam!r}")
    sys.stdout.write(to_text(s))
    return EXIT_OK


def cmd_simulate(args) -> int:
    path = Path(args.script)
    res = run_scenario(path.read_text(), resolve_one, path.parent, out=sys.stdout)
    return EXIT_OK if res.ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", help="reconstruction degree K or range A..B")
    common.add_argument("--format", choices=["table", "structured"], default="table")
    common.add_argument("--lenient", action="store_true", help="skip malformed database records")
    common.add_argument("--budget", type=int, default=None,
                        help="max partial subsets visited (default $FRCODE_BUDGET or 10^8)")
    common.add_argument("--workers", type=int, default=1)

    p = _Parser(prog="frcode", description="Fractional repetition code analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, helptext in [
        ("analyze", cmd_analyze, "parameters, simplicity, hierarchy and bounds"),
        ("dual", cmd_dual, "print the transpose code"),
        ("hierarchy", cmd_hierarchy, "M_k / N_k table and Pareto points"),
        ("verify-duality", cmd_verify, "check M_k computed directly and through the dual"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("input", help="fixture name or path ('./' forces a path)")
        if name == "analyze":
            sp.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("bounds", parents=[common], help="bound report")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--params", help="n,alpha,v,rho")
    sp.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None,
                    help="include the exact M_k column")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("construct", help="emit a code from a named family")
    sp.add_argument("family", choices=["complete-graph", "petersen", "graph", "fixture"])
    sp.add_argument("arg", nargs="?", help="T for complete-graph, edge-list path, or fixture name")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("simulate", help="run a storage scenario script")
    sp.add_argument("script")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = default_budget()
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"frcode: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, FormatError) as exc:
        print(f"frcode: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"frcode: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
