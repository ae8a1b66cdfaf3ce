'''JSON and DOT import/export of graphs, complexes, functions, maps and reports'''
import json
from dataclasses import asdict
from typing import Any, Iterable

import numpy as np
from sympy import QQ, Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex
from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.errors import IncompatibleFunctionError, InvalidGraphError
from tropical_pseudostable.plmap.plmap_utils import ConeAssignment, PLMap
from tropical_pseudostable.pwpoly.pp_utils import PiecewisePoly, coordinate_ring
from tropical_pseudostable.strata.strata_utils import StrataExpr
from tropical_pseudostable.strata.verification import ReportEntry

__all__ = [
    "dumps",
    "graph_to_dict",
    "graph_from_dict",
    "graph_to_json",
    "graph_from_json",
    "graph_to_dot",
    "complex_to_dict",
    "complex_from_dict",
    "complex_to_dot",
    "complex_to_json",
    "complex_from_json",
    "pp_to_json",
    "pp_from_json",
    "pp_to_dict",
    "pp_from_dict",
    "plmap_to_dict",
    "plmap_from_dict",
    "strata_to_dict",
    "report_to_dict",
]


def dumps(data: Any, indent: int | None = None) -> str:
    '''compact by default; key order is the insertion order of the dicts'''
    if indent is None:
        return json.dumps(data, separators=(",", ":"))
    return json.dumps(data, indent=indent)


def graph_to_dict(graph: DualGraph) -> dict:
    return {
        "vertices": [{"genus": h} for h in graph.genera],
        "edges": [[a, b] for a, b in graph.edges],
        "legs": [{"label": label, "vertex": v} for label, v in enumerate(graph.legs, start=1)],
    }


def graph_from_dict(data: dict) -> DualGraph:
    try:
        legs = sorted(data["legs"], key=lambda leg: leg["label"])
        if [leg["label"] for leg in legs] != list(range(1, len(legs) + 1)):
            raise InvalidGraphError(f"leg labels must be 1..{len(legs)}")
        return DualGraph(tuple(v["genus"] for v in data["vertices"]),
                         tuple(tuple(e) for e in data["edges"]),
                         tuple(leg["vertex"] for leg in legs))
    except (KeyError, TypeError) as e:
        raise InvalidGraphError(f"malformed graph record: {e}") from e


def graph_to_json(graph: DualGraph) -> str:
    return dumps(graph_to_dict(graph))


def graph_from_json(text: str) -> DualGraph:
    return graph_from_dict(json.loads(text))


def graph_to_dot(graph: DualGraph, name: str = "G") -> str:
    lines = [f'graph "{name}" {{']
    for v, h in enumerate(graph.genera):
        lines.append(f'  v{v} [label="g={h}"];')
    for a, b in graph.edges:
        lines.append(f"  v{a} -- v{b};")
    for label, v in enumerate(graph.legs, start=1):
        lines.append(f'  leg{label} [shape=plaintext, label="{label}"];')
        lines.append(f"  v{v} -- leg{label};")
    lines.append("}")
    return "\n".join(lines)


def complex_to_json(complex: ConeComplex) -> str:
    return dumps(complex_to_dict(complex))


def complex_from_json(text: str) -> ConeComplex:
    return complex_from_dict(json.loads(text))


def pp_to_json(f: PiecewisePoly) -> str:
    return dumps(pp_to_dict(f))


def pp_from_json(text: str, complex: ConeComplex) -> PiecewisePoly:
    return pp_from_dict(json.loads(text), complex)


def complex_to_dot(complex: ConeComplex) -> str:
    return "\n".join(graph_to_dot(cone.graph, complex.cone_name(cone.id)) for cone in complex)


def complex_to_dict(complex: ConeComplex, faces: str = "all") -> dict:
    '''`faces` is "all" for every face map or "facets" for codimension one only'''
    if faces == "all":
        face_maps: Iterable = complex.face_maps()
    else:
        face_maps = (f for cone in complex for f in complex.facets(cone.id))
    return {
        "genus": complex.genus,
        "n": complex.n_legs,
        "kind": complex.kind,
        "weights": [str(w) for w in complex.weights] if complex.weights is not None else None,
        "cones": [{"id": cone.id, "dim": cone.dim, "graph": graph_to_dict(cone.graph),
                   "aut_order": cone.aut.order, "folded": cone.folded}
                  for cone in complex],
        "faces": [{"source": f.source, "target": f.target, "kept_edges": list(f.kept)}
                  for f in face_maps],
        "rays": complex.rays_by_label(),
    }


def complex_from_dict(data: dict) -> ConeComplex:
    weights = data.get("weights")
    return ConeComplex(data["genus"], data["n"],
                       [graph_from_dict(cone["graph"]) for cone in data["cones"]],
                       kind=data.get("kind", "stable"),
                       weights=[Rational(w) for w in weights] if weights is not None else None)


def pp_to_dict(f: PiecewisePoly) -> dict:
    '''cone id -> list of {coeff, exponents}; cones where `f` vanishes are left out'''
    return {str(cone.id): [{"coeff": str(QQ.to_sympy(coeff)), "exponents": list(monom)}
                           for monom, coeff in f[cone.id].terms()]
            for cone in f.complex if f[cone.id]}


def pp_from_dict(data: dict, complex: ConeComplex) -> PiecewisePoly:
    '''
    reads the flat cone id map; an envelope {"kind": ..., "pieces": {...}}
    is accepted too, provided its kind matches `complex`
    '''
    if "pieces" in data:
        kind = data.get("kind", complex.kind)
        if kind != complex.kind:
            raise IncompatibleFunctionError(
                f"a function on the {kind} complex cannot be read on the {complex.kind} one")
        data = data["pieces"]
    pieces = {}
    for cone_id, terms in data.items():
        ring = coordinate_ring(complex[int(cone_id)].dim)
        pieces[int(cone_id)] = ring.from_dict(
            {tuple(term["exponents"]): QQ.convert(Rational(term["coeff"])) for term in terms})
    return PiecewisePoly(complex, pieces)


def plmap_to_dict(m: PLMap) -> dict:
    '''source cone id -> {target, matrix}'''
    return {str(cone.id): {"target": a.target, "matrix": a.matrix.tolist()}
            for cone, a in zip(m.source, m.assignments)}


def plmap_from_dict(data: dict, source: ConeComplex, target: ConeComplex,
                    name: str = "") -> PLMap:
    assignments = []
    for cone in source:
        record = data[str(cone.id)]
        matrix = np.array(record["matrix"], dtype=np.int64).reshape(
            target[record["target"]].dim, cone.dim)
        assignments.append(ConeAssignment(record["target"], matrix))
    return PLMap(source, target, assignments, name=name)


def strata_to_dict(expr: StrataExpr) -> dict:
    data: dict = {
        "side": expr.side,
        "terms": [{"graph": graph_to_dict(stratum.graph),
                   "decorations": [{"half_edge": h, "exponent": a}
                                   for h, a in enumerate(stratum.half_edge_exponents) if a],
                   "legs": [{"leg": i, "exponent": a}
                            for i, a in enumerate(stratum.leg_exponents, start=1) if a],
                   "coeff": str(coeff)}
                  for stratum, coeff in expr],
    }
    if expr.cusp:
        data["cusp"] = str(expr.cusp)
    return data


def report_to_dict(report: Iterable[ReportEntry]) -> list[dict]:
    return [asdict(entry) for entry in report]
