import itertools
import logging
from typing import Sequence

import networkx as nx
from sympy import Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex
from tropical_pseudostable.dualgraph.canon_utils import canonical_form
from tropical_pseudostable.dualgraph.graph_utils import (
    LIGHT_WEIGHT, DualGraph, check_admitted_range, check_weights)
from tropical_pseudostable.errors import OutOfRangeError

__all__ = [
    "DEFAULT_EDGE_BOUND",
    "LIGHT_WEIGHT",
    "light_weights",
    "check_edge_bound",
    "stable_graphs",
    "enumerate_stable",
    "enumerate_weighted",
    "enumerate_by_brute_force",
]

logger = logging.getLogger(__name__)

DEFAULT_EDGE_BOUND = 7


def light_weights(n_legs: int, epsilon=LIGHT_WEIGHT) -> tuple[Rational, ...]:
    return (Rational(epsilon),) * n_legs


def check_edge_bound(genus: int, n_legs: int, edge_bound: int) -> None:
    check_admitted_range(genus, n_legs)
    if 3 * genus - 3 + n_legs > edge_bound:
        raise OutOfRangeError(
            f"3g - 3 + n = {3 * genus - 3 + n_legs} exceeds the edge bound {edge_bound}")


def _degenerations(graph: DualGraph):
    '''graphs with one more edge that contract back onto `graph`'''
    for v, h in enumerate(graph.genera):
        if h >= 1:
            genera = list(graph.genera)
            genera[v] -= 1
            yield DualGraph(tuple(genera), graph.edges + ((v, v),), graph.legs)

        half_edges = graph.half_edges_at(v)
        legs = [label - 1 for label in graph.legs_at(v)]
        new = graph.n_vertices
        for moved_half_edges in itertools.product((False, True), repeat=len(half_edges)):
            edges = [list(pair) for pair in graph.edges]
            for half_edge, moved in zip(half_edges, moved_half_edges):
                if moved:
                    edges[half_edge // 2][half_edge % 2] = new
            for moved_legs in itertools.product((False, True), repeat=len(legs)):
                leg_vertices = list(graph.legs)
                for i, moved in zip(legs, moved_legs):
                    if moved:
                        leg_vertices[i] = new
                for h_new in range(h + 1):
                    genera = list(graph.genera) + [h_new]
                    genera[v] = h - h_new
                    yield DualGraph(tuple(genera),
                                    tuple(map(tuple, edges)) + ((v, new),),
                                    tuple(leg_vertices))


def stable_graphs(genus: int, n_legs: int) -> list[DualGraph]:
    '''
    all stable graphs of type (g, n) up to isomorphism, found by degenerating
    the smooth graph one edge at a time
    '''
    level = {canonical_form(DualGraph.smooth(genus, n_legs)).key:
             DualGraph.smooth(genus, n_legs)}
    found = dict(level)
    for n_edges in range(1, 3 * genus - 3 + n_legs + 1):
        next_level = {}
        for graph in level.values():
            for degenerate in _degenerations(graph):
                if not degenerate.is_stable():
                    continue
                labeling = canonical_form(degenerate)
                next_level.setdefault(labeling.key, labeling.graph)
        logger.debug(f"({genus}, {n_legs}): {len(next_level)} graphs with {n_edges} edges")
        found.update(next_level)
        level = next_level
    return list(found.values())


def enumerate_stable(genus: int, n_legs: int,
                     edge_bound: int = DEFAULT_EDGE_BOUND) -> ConeComplex:
    check_edge_bound(genus, n_legs, edge_bound)
    return ConeComplex(genus, n_legs, stable_graphs(genus, n_legs))


def enumerate_weighted(genus: int, n_legs: int, weights: Sequence,
                       edge_bound: int = DEFAULT_EDGE_BOUND) -> ConeComplex:
    '''
    the complex of graphs stable for the Hassett weights `weights`; these
    are always among the ordinary stable graphs
    '''
    check_edge_bound(genus, n_legs, edge_bound)
    omega = check_weights(genus, weights, n_legs)
    graphs = [graph for graph in stable_graphs(genus, n_legs)
              if graph.is_weighted_stable(omega)]
    return ConeComplex(genus, n_legs, graphs, kind="weighted", weights=omega)


def enumerate_by_brute_force(genus: int, n_legs: int) -> list[DualGraph]:
    '''
    exhaustive search over vertex counts, edge multisets, genus and leg
    distributions, deduplicated by canonical form. Only practical for
    small (g, n).
    '''
    check_admitted_range(genus, n_legs)
    found = {}
    for n_vertices in range(1, 2 * genus - 2 + n_legs + 1):
        pairs = [(a, b) for a in range(n_vertices) for b in range(a, n_vertices)]
        for n_edges in range(n_vertices - 1, 3 * genus - 3 + n_legs + 1):
            betti = n_edges - n_vertices + 1
            if betti > genus:
                break
            for edges in itertools.combinations_with_replacement(pairs, n_edges):
                if not _connected(n_vertices, edges):
                    continue
                degree = [0] * n_vertices
                for a, b in edges:
                    degree[a] += 1
                    degree[b] += 1
                for genera in _genus_distributions(genus - betti, n_vertices):
                    for legs in itertools.product(range(n_vertices), repeat=n_legs):
                        valence = list(degree)
                        for v in legs:
                            valence[v] += 1
                        if any(2 * h - 2 + val <= 0 for h, val in zip(genera, valence)):
                            continue
                        labeling = canonical_form(DualGraph(genera, edges, legs))
                        found.setdefault(labeling.key, labeling.graph)
    logger.debug(f"brute force ({genus}, {n_legs}): {len(found)} graphs")
    return list(found.values())


def _connected(n_vertices: int, edges) -> bool:
    helper = nx.MultiGraph()
    helper.add_nodes_from(range(n_vertices))
    helper.add_edges_from(edges)
    return nx.is_connected(helper)


def _genus_distributions(total: int, n_vertices: int):
    for genera in itertools.product(range(total + 1), repeat=n_vertices):
        if sum(genera) == total:
            yield genera


def main():
    logging.basicConfig(level=logging.INFO)
    for genus, n_legs in ((1, 2), (1, 3), (2, 1)):
        stable = enumerate_stable(genus, n_legs)
        print(f"({genus}, {n_legs}) stable: dims {stable.dims}")
        print(f"({genus}, {n_legs}) pseudostable: "
              f"dims {stable.pseudostable_subcomplex().dims}")


if __name__ == "__main__":
    main()
