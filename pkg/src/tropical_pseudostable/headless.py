import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from sympy import Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex, ConePoint
from tropical_pseudostable.complex.enumeration import (
    DEFAULT_EDGE_BOUND, LIGHT_WEIGHT, enumerate_weighted, light_weights)
from tropical_pseudostable.errors import TropicalModuliError
from tropical_pseudostable.expressions import parse_expression, parse_point
from tropical_pseudostable.plmap.plmap_utils import hassett_moduli, tropical_moduli
from tropical_pseudostable.pwpoly.pp_utils import strict_support_decomposition
from tropical_pseudostable.serialization import (
    complex_from_json, complex_to_dict, complex_to_dot, dumps, graph_to_dict, graph_to_dot,
    graph_to_json, plmap_to_dict, pp_to_dict, report_to_dict, strata_to_dict)
from tropical_pseudostable.strata.strata_utils import alpha_star, integrate, integrate_ps
from tropical_pseudostable.strata.verification import all_passed, verify

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SUFFIXES = {"stable": "", "pseudostable": "_ps", "weighted": "_w"}


def _complex(args) -> ConeComplex:
    '''the complex selected by --pseudostable / --weighted'''
    if getattr(args, "weighted", None) is not None:
        if args.weighted == LIGHT_WEIGHT:
            return hassett_moduli(args.genus, args.legs, args.weighted, args.edge_bound).weighted
        return enumerate_weighted(args.genus, args.legs, light_weights(args.legs, args.weighted),
                                  args.edge_bound)
    moduli = tropical_moduli(args.genus, args.legs, args.edge_bound)
    return moduli.pseudostable if getattr(args, "pseudostable", False) else moduli.stable


def _dims_line(complex: ConeComplex) -> str:
    return f"dims: [{','.join(str(d) for d in complex.dims)}], total {len(complex)}"


def _format_point(complex: ConeComplex, point: ConePoint) -> str:
    if not point.coords:
        return "origin"
    name = complex.cone_name(point.cone) + SUFFIXES[complex.kind]
    if len(point.coords) == 1:
        return f"ray {name}, coord {point.coords[0]}"
    return f"cone {name}, coords {','.join(str(x) for x in point.coords)}"


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
        logger.info(f"wrote {output}")
    else:
        print(text)


def cmd_enumerate(args) -> int:
    complex = _complex(args)
    if args.format == "json":
        print(dumps(complex_to_dict(complex, faces="facets"), indent=2))
        return EXIT_OK
    print(_dims_line(complex))
    for cone in complex:
        print(f"  c{cone.id} {complex.cone_name(cone.id)}: dim {cone.dim}, "
              f"|Aut| {cone.aut.order}{', folded' if cone.folded else ''}, {cone.graph}")
    return EXIT_OK


def cmd_complex(args) -> int:
    complex = _complex(args)
    cones = [complex.find(args.cone)] if args.cone else [cone.id for cone in complex]
    for cone_id in cones:
        cone = complex[cone_id]
        rays = ", ".join(complex.ray_label(r) for r in complex.edge_rays(cone_id))
        star = ", ".join(complex.cone_name(c) for c in sorted(complex.open_star(cone_id)))
        print(f"{complex.cone_name(cone_id)} (c{cone_id}): {cone.graph}")
        print(f"  dim {cone.dim}, |Aut| {cone.aut.order}, edge action {cone.aut.edge_action}")
        print(f"  rays: {rays or '-'}")
        print(f"  open star: {star}")
    return EXIT_OK


def cmd_pp(args) -> int:
    complex = _complex(args)
    f = parse_expression(complex, args.expr)
    if args.action == "decompose":
        for cone_id, poly in strict_support_decomposition(f):
            print(f"{complex.cone_name(cone_id)}: {poly.as_expr()}")
        return EXIT_OK
    if args.point:
        cone_id, coords = parse_point(complex, args.point)
        print(f.evaluate(cone_id, coords))
    elif args.format == "json":
        print(dumps(pp_to_dict(f)))
    else:
        print(f)
    return EXIT_OK


def cmd_map(args) -> int:
    if args.which == "trop-t":
        moduli = tropical_moduli(args.genus, args.legs, args.edge_bound)
        m = moduli.trop_T
    else:
        m = hassett_moduli(args.genus, args.legs, args.epsilon, args.edge_bound).trop_pi

    if args.point:
        cone_id, coords = parse_point(m.source, args.point)
        print(_format_point(m.target, m.apply(cone_id, coords)))
    elif args.pullback:
        print(m.pullback(parse_expression(m.target, args.pullback)))
    elif args.format == "json":
        print(dumps(plmap_to_dict(m)))
    else:
        for cone, assignment in zip(m.source, m.assignments):
            print(f"{m.source.cone_name(cone.id)} -> "
                  f"{m.target.cone_name(assignment.target)}{SUFFIXES[m.target.kind]} "
                  f"{assignment.matrix.tolist()}")
    return EXIT_OK


def cmd_integrate(args) -> int:
    complex = _complex(args)
    f = parse_expression(complex, args.expr)
    if args.pseudostable and not args.naive:
        value = integrate_ps(f, tropical_moduli(args.genus, args.legs, args.edge_bound).trop_T)
    else:
        expr = alpha_star(f)
        if args.format == "json":
            print(dumps(strata_to_dict(expr)))
        value = integrate(expr, naive=args.naive)
    print(value * args.times)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify(args.genus, args.legs, args.edge_bound)
    if args.format == "json":
        print(dumps(report_to_dict(report), indent=2))
    else:
        for entry in report:
            print(f"{entry.status:13s} {entry.id}: {entry.statement} [{entry.value}]")
    return EXIT_OK if all_passed(report) else EXIT_FAILED


def cmd_export(args) -> int:
    complex = _complex(args)
    if args.cone:
        graph = complex[complex.find(args.cone)].graph
        text = graph_to_dot(graph, args.cone) if args.format == "dot" else graph_to_json(graph)
    elif args.format == "dot":
        text = complex_to_dot(complex)
    else:
        text = dumps(complex_to_dict(complex))
    _write(text, args.output)
    return EXIT_OK


def cmd_import(args) -> int:
    complex = complex_from_json(Path(args.input).read_text())
    print(_dims_line(complex))
    for cone in complex:
        print(dumps(graph_to_dict(cone.graph)))
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, choose_complex: bool = True) -> None:
    parser.add_argument("-g", "--genus", type=int, required=True)
    parser.add_argument("-n", "--legs", type=int, required=True)
    parser.add_argument("--edge-bound", type=int, default=DEFAULT_EDGE_BOUND)
    if choose_complex:
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--pseudostable", action="store_true",
                           help="use the pseudostable subcomplex")
        group.add_argument("--weighted", type=Rational, metavar="EPS",
                           help="use the complex of Hassett weights (EPS, ..., EPS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropical-pseudostable",
        description="tropical moduli of stable and pseudostable curves")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for info, -vv for debug output")
    commands = parser.add_subparsers(dest="command", required=True)

    enumerate_ = commands.add_parser("enumerate", help="list the cones of a complex")
    _add_common(enumerate_)
    enumerate_.add_argument("--format", choices=("text", "json"), default="text")
    enumerate_.set_defaults(run=cmd_enumerate)

    complex_ = commands.add_parser("complex", help="rays, automorphisms and stars of cones")
    _add_common(complex_)
    complex_.add_argument("--cone", help="a single cone, e.g. banana or rho1")
    complex_.set_defaults(run=cmd_complex)

    pp = commands.add_parser("pp", help="evaluate piecewise polynomial expressions")
    pp.add_argument("action", choices=("eval", "decompose"))
    _add_common(pp)
    pp.add_argument("--expr", required=True)
    pp.add_argument("--point", help='evaluate at "cone=<name>;coords=<x1>,<x2>"')
    pp.add_argument("--format", choices=("text", "json"), default="text")
    pp.set_defaults(run=cmd_pp)

    map_ = commands.add_parser("map", help="apply trop(T) or trop(pi)")
    map_.add_argument("which", choices=("trop-t", "trop-pi"))
    _add_common(map_, choose_complex=False)
    map_.add_argument("--epsilon", type=Rational, default=LIGHT_WEIGHT)
    map_.add_argument("--point", help='"cone=<name>;coords=<x1>,<x2>"')
    map_.add_argument("--pullback", metavar="EXPR", help="pull back a function on the target")
    map_.add_argument("--format", choices=("text", "json"), default="text")
    map_.set_defaults(run=cmd_map)

    integrate_ = commands.add_parser("integrate", help="integrate alpha* of an expression")
    _add_common(integrate_)
    integrate_.add_argument("--expr", required=True)
    integrate_.add_argument("--times", type=Rational, default=Rational(1))
    integrate_.add_argument("--naive", action="store_true",
                            help="stable-side formula on the pseudostable side")
    integrate_.add_argument("--format", choices=("text", "json"), default="text")
    integrate_.set_defaults(run=cmd_integrate)

    verify_ = commands.add_parser("verify", help="check every identity for (g, n)")
    _add_common(verify_, choose_complex=False)
    verify_.add_argument("--format", choices=("text", "json"), default="text")
    verify_.set_defaults(run=cmd_verify)

    export = commands.add_parser("export", help="write a complex or a graph")
    _add_common(export)
    export.add_argument("--cone", help="export only the graph of this cone")
    export.add_argument("--format", choices=("json", "dot"), default="json")
    export.add_argument("-o", "--output")
    export.set_defaults(run=cmd_export)

    import_ = commands.add_parser("import", help="read a complex export back")
    import_.add_argument("-i", "--input", required=True)
    import_.set_defaults(run=cmd_import)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level)
    try:
        return args.run(args)
    except TropicalModuliError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except (OSError, KeyError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
