"""Command-line interface.

Usage::

    polycobar complex show --complex K.json
    polycobar complex bracket "[[m1,m2,m3],m4,m5]" [--complex K.json]
    polycobar complex substitute --complex K.json --part P1.json --part P2.json ...
    polycobar cobar spheres --complex K.json --dims 1=5,2=2 [--check]
    polycobar cobar dj --complex K.json --max-degree 9 --check
    polycobar cobar cpn 3
    polycobar homology cpn 2 --up-to 9
    polycobar whitehead --example
    polycobar whitehead --bracket "[m1,m2]" --complex wedge.json

Complex arguments are JSON files or inline JSON objects.  Exit codes: 0 on
success, 1 for usage and parse errors, 2 when a mathematical precondition
fails, 3 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .algebra import GradedElement
from .cobar import ah_cpn, check_d_squared, cobar_dj, cobar_spheres
from .complexes import (
    SimplicialComplex,
    complexes_of_bracket,
    contains_subcomplex,
    full_simplex,
    leaves,
    load_complex,
    missing_simplices,
    parse_bracket,
    substitution,
)
from .errors import (
    InvariantViolation,
    MalformedInputError,
    PolycobarError,
    PreconditionError,
    TruncationError,
)
from .homology import homology
from .whitehead import (
    EXAMPLE_BRACKET,
    _example_labels,
    first_order_hurewicz_cycle,
    hurewicz_class_report,
    iterated_example_chain,
)

DEFAULT_MAX_DEGREE = 12

log = logging.getLogger("polycobar")


class UsageError(MalformedInputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- argument helpers ---------------------------------------------------------


def read_complex(text: str) -> SimplicialComplex:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"inline complex: invalid JSON ({exc})") from exc
        return SimplicialComplex.from_dict(data)
    try:
        return load_complex(text)
    except OSError as exc:
        raise MalformedInputError(f"cannot read complex file {text}: {exc.strerror}") from exc


def parse_dims(text: str | None, vertices=None):
    """``"1=5,2=2"`` (keyed) or ``"2,2"`` (by vertex order); one bare value applies to all vertices."""
    if text is None:
        return None
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise MalformedInputError("empty --dims")
    try:
        if all("=" in t for t in items):
            out = {}
            for t in items:
                k, v = t.split("=", 1)
                out[int(k)] = int(v)
            return out
        if any("=" in t for t in items):
            raise MalformedInputError("--dims mixes keyed and positional entries")
        values = [int(t) for t in items]
    except ValueError as exc:
        raise MalformedInputError(f"bad --dims {text!r}: {exc}") from exc
    if vertices is None:
        return list(values)
    if len(values) == 1:
        return {v: values[0] for v in vertices}
    if len(values) != len(vertices):
        raise MalformedInputError(f"--dims gives {len(values)} values for {len(vertices)} vertices")
    return dict(zip(vertices, values))


def spheres_input(args):
    """Complex and dims for the sphere cobar, defaulting to the full simplex on the dims keys."""
    if args.complex:
        K = read_complex(args.complex)
        dims = parse_dims(args.dims, K.vertices)
    else:
        dims = parse_dims(args.dims)
        if dims is None:
            raise UsageError("spheres needs --complex or --dims")
        if isinstance(dims, list):
            dims = dict(zip(range(1, len(dims) + 1), dims))
        K = full_simplex(sorted(dims))
    if dims is None:
        dims = {v: 2 for v in K.vertices}
    return K, dims


def build_algebra(args, bound=None, need_bound=False):
    mode = args.mode
    if mode != "cpn" and args.n is not None:
        raise UsageError(f"unexpected argument {args.n!r} for {mode}")
    cap = args.max_degree if args.max_degree is not None else DEFAULT_MAX_DEGREE
    if bound is not None and bound > cap:
        raise TruncationError(f"the computation needs degree {bound}, above --max-degree {cap}")
    if mode == "spheres":
        K, dims = spheres_input(args)
        return cobar_spheres(K, dims)
    if mode == "dj":
        if not args.complex:
            raise UsageError("dj needs --complex")
        K = read_complex(args.complex)
        if bound is None:
            if need_bound and args.max_degree is None:
                raise TruncationError("cobar dj needs an explicit --max-degree")
            bound = cap
        return cobar_dj(K, bound)
    n = parse_cpn(args.n)
    if n is None and bound is None and need_bound and args.max_degree is None:
        raise TruncationError("CP^inf needs an explicit --max-degree")
    if bound is None:
        bound = None if n is not None and args.max_degree is None else cap
    return ah_cpn(n, bound)


def parse_cpn(text):
    if text is None:
        raise UsageError("cpn needs n (an integer or 'inf')")
    if text.lower() in ("inf", "infinity"):
        return None
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"bad n {text!r}; expected an integer or 'inf'") from None


# --- output ---------------------------------------------------------------------


def emit(args, data, table_lines):
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n".join(table_lines))


def _facets_text(K):
    return " ".join("{" + ",".join(map(str, f)) + "}" for f in K.facets())


def element_from_json(terms, generators):
    """Inverse of :meth:`GradedElement.to_json` given the generators in use."""
    by_label = {g.label: g for g in generators}
    return GradedElement((tuple(by_label[l] for l in labels), c) for c, labels in terms)


# --- commands ---------------------------------------------------------------------


def cmd_complex(args):
    if args.action == "show":
        if not args.complex:
            raise UsageError("complex show needs --complex")
        K = read_complex(args.complex)
        data = {**K.to_dict(), "simplices": [list(s) for s in K.sorted_simplices()]}
        lines = [f"vertices: {' '.join(map(str, K.vertices))}", f"facets:   {_facets_text(K)}",
                 f"simplices: {len(K)} (including the empty simplex)", f"dimension: {K.dimension}"]
        emit(args, data, lines)
        return 0
    if args.action == "substitute":
        if not args.complex or not args.part:
            raise UsageError("complex substitute needs --complex and one --part per vertex")
        K = read_complex(args.complex)
        result = substitution(K, [read_complex(p) for p in args.part])
        emit(args, result.to_dict(), [f"vertices: {' '.join(map(str, result.vertices))}",
                                      f"facets:   {_facets_text(result)}"])
        return 0
    if args.expr is None:
        raise UsageError("complex bracket needs a bracket expression")
    w = parse_bracket(args.expr)
    boundary, full = complexes_of_bracket(w)
    data = {"bracket": str(w), "boundary": boundary.to_dict(), "full": full.to_dict()}
    lines = [f"bracket:  {w}", f"boundary: {_facets_text(boundary)}", f"full:     {_facets_text(full)}"]
    if args.complex:
        data.update(_inclusions(read_complex(args.complex), boundary, full))
        lines += [f"boundary in K: {data['boundary_in_K']}", f"full in K:     {data['full_in_K']}"]
    emit(args, data, lines)
    return 0


def _inclusions(K, boundary, full):
    out = {"boundary_in_K": contains_subcomplex(K, boundary), "full_in_K": contains_subcomplex(K, full)}
    if not out["boundary_in_K"]:
        out["missing"] = [list(s) for s in missing_simplices(K, boundary)]
    return out


def cmd_cobar(args):
    A = build_algebra(args, need_bound=True)
    data = A.to_dict()
    lines = [A.name, f"{len(A.generators)} generators" + (f", degree <= {A.degree_bound}" if A.degree_bound else "")]
    width = max((len(g.label) for g in A.generators), default=0)
    for g in A.generators:
        lines.append(f"  {g.label:<{width}}  deg {g.degree:>2}  d = {A.d(g)}")
    status = 0
    if args.check:
        report = check_d_squared(A, jobs=args.jobs)
        data["check"] = report.to_dict()
        lines.append(f"d^2 = 0 check on {report.checked} generators: {'PASS' if report.passed else 'FAIL'}")
        for label, v in report.to_dict()["failures"].items():
            lines.append(f"  d^2 {label} = {v}")
        status = 0 if report.passed else 3
    emit(args, data, lines)
    return status


def cmd_homology(args):
    A = build_algebra(args, bound=args.up_to + 1)
    summary = homology(A, args.up_to, jobs=args.jobs)
    lines = [summary.algebra, f"{'degree':>6} | {'rank':>5} | {'torsion':<10} | chains"]
    for h in summary.degrees:
        tors = ",".join(map(str, h.torsion)) or "-"
        lines.append(f"{h.degree:>6} | {h.free_rank:>5} | {tors:<10} | {h.chain_rank}")
    if summary.has_torsion():
        lines.append("WARNING: torsion detected")
        log.warning("torsion detected in %s", summary.algebra)
    emit(args, summary.to_dict(), lines)
    return 0


def _chain_report(chain, report):
    data = chain.to_dict()
    data["cycle"] = report["cycle"]
    data["zero_class"] = report["zero_class"]
    data["witness"] = None if report["witness"] is None else report["witness"].to_json()
    return data


def cmd_whitehead(args):
    if args.example == bool(args.bracket):
        raise UsageError("whitehead needs exactly one of --example or --bracket")
    cap = args.max_degree if args.max_degree is not None else DEFAULT_MAX_DEGREE
    text = EXAMPLE_BRACKET if args.example else args.bracket
    w = parse_bracket(text)
    boundary, full = complexes_of_bracket(w)
    K = read_complex(args.complex) if args.complex else boundary
    data = {"bracket": str(w), "boundary": boundary.to_dict(), **_inclusions(K, boundary, full)}
    lines = [f"bracket: {w}", f"K:       {_facets_text(K)}",
             f"boundary in K: {data['boundary_in_K']}", f"full in K:     {data['full_in_K']}"]
    if w.depth == 1:
        need = 2 * len(leaves(w)) - 1
        if need > cap:
            raise TruncationError(f"the zero-class test needs degree {need}, above --max-degree {cap}")
        chain = first_order_hurewicz_cycle(leaves(w), K)
    else:
        try:
            _example_labels(w)
        except PreconditionError:
            data["chain"] = None
            lines.append("chain:   not constructed for this bracket shape (inclusion tests only)")
            emit(args, data, lines)
            return 0
        if cap < 8:
            raise TruncationError(f"the example needs degree 8, above --max-degree {cap}")
        chain = iterated_example_chain(w, K)
    report = hurewicz_class_report(chain)
    data.update(_chain_report(chain, report))
    lines += [f"degree:  {chain.degree}", f"chain:   {chain.chain}", f"cycle:   {report['cycle']}",
              f"zero class: {report['zero_class']}"]
    if report["witness"] is not None:
        lines.append(f"witness: {report['witness']}")
    emit(args, data, lines)
    return 0


# --- parser -----------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--max-degree", type=int, default=None, metavar="N",
                   help=f"degree bound (default {DEFAULT_MAX_DEGREE} where a bound is optional)")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = _Parser(prog="polycobar", description="Cobar models of polyhedral products.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("complex", help="simplicial complexes and bracket complexes")
    p.add_argument("action", choices=("show", "bracket", "substitute"))
    p.add_argument("expr", nargs="?", help="bracket expression")
    p.add_argument("--complex", help="complex JSON file or inline JSON")
    p.add_argument("--part", action="append", help="substitution part (repeat once per vertex)")
    _common(p)
    p.set_defaults(func=cmd_complex)

    for name, func, helptext in (("cobar", cmd_cobar, "print an algebra"),
                                 ("homology", cmd_homology, "integer homology table")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("mode", choices=("spheres", "dj", "cpn"))
        p.add_argument("n", nargs="?", help="n for cpn (integer or 'inf')")
        p.add_argument("--complex")
        p.add_argument("--dims", help="sphere dimensions, '1=5,2=2' or '2,2'")
        if name == "cobar":
            p.add_argument("--check", action="store_true", help="verify d^2 = 0")
        else:
            p.add_argument("--up-to", type=int, required=True, metavar="D")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("whitehead", help="Hurewicz cycles of Whitehead products")
    p.add_argument("--bracket")
    p.add_argument("--example", action="store_true")
    p.add_argument("--complex")
    _common(p)
    p.set_defaults(func=cmd_whitehead)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if getattr(args, "up_to", 0) < 0:
            raise UsageError("--up-to must be >= 0")
        if args.max_degree is not None and args.max_degree < 1:
            raise UsageError("--max-degree must be >= 1")
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PolycobarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
