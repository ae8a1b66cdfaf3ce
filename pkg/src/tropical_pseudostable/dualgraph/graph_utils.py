import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
from sympy import Rational

from tropical_pseudostable.errors import InvalidGraphError, OutOfRangeError

__all__ = [
    "LIGHT_WEIGHT",
    "DualGraph",
    "TropicalCurve",
    "check_admitted_range",
    "check_weights",
]

logger = logging.getLogger(__name__)

# equal light Hassett weight on every marking
LIGHT_WEIGHT = Rational(1, 100)


@dataclass(frozen=True)
class DualGraph:
    '''
    vertex-weighted multigraph with legs, the combinatorial type of a
    nodal curve.

    Edge `k = (a, b)` is made of the two half-edges `2k` (at `a`) and
    `2k + 1` (at `b`); a loop has `a == b`. `legs[i]` is the vertex
    carrying the marking `i + 1`.
    '''
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()
    legs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "genera", tuple(int(h) for h in self.genera))
        object.__setattr__(self, "edges",
                           tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "legs", tuple(int(v) for v in self.legs))

        if not self.genera:
            raise InvalidGraphError("a dual graph needs at least one vertex")
        if any(h < 0 for h in self.genera):
            raise InvalidGraphError(f"negative vertex genus in {self.genera}")
        for a, b in self.edges:
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise InvalidGraphError(f"edge {(a, b)} has no such vertex")
        for label, v in enumerate(self.legs, start=1):
            if not 0 <= v < self.n_vertices:
                raise InvalidGraphError(f"leg {label} sits on no vertex ({v})")
        if not nx.is_connected(self.to_networkx()):
            raise InvalidGraphError(f"graph {self} is not connected")

    @classmethod
    def smooth(cls, genus: int, n_legs: int) -> 'DualGraph':
        '''the graph of a smooth curve: one vertex, no edges'''
        return cls((genus,), (), (0,) * n_legs)

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    def genus(self) -> int:
        '''total genus: sum of the vertex genera plus the first Betti number'''
        return sum(self.genera) + self.n_edges - self.n_vertices + 1

    def half_edge_vertex(self, half_edge: int) -> int:
        return self.edges[half_edge // 2][half_edge % 2]

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h in range(2 * self.n_edges)
                if self.half_edge_vertex(h) == v]

    def legs_at(self, v: int) -> list[int]:
        '''marking labels (1-based) carried by the vertex `v`'''
        return [label for label, w in enumerate(self.legs, start=1) if w == v]

    def is_loop(self, edge: int) -> bool:
        a, b = self.edges[edge]
        return a == b

    def loops_at(self, v: int) -> list[int]:
        return [e for e, (a, b) in enumerate(self.edges) if a == b == v]

    def other_end(self, edge: int, v: int) -> int:
        a, b = self.edges[edge]
        return b if a == v else a

    def valence(self, v: int) -> int:
        '''half-edges at `v` (a loop counts twice) plus legs at `v`'''
        if not 0 <= v < self.n_vertices:
            raise InvalidGraphError(f"no vertex {v} in {self}")
        return len(self.half_edges_at(v)) + len(self.legs_at(v))

    def is_stable(self) -> bool:
        return all(2 * h - 2 + self.valence(v) > 0
                   for v, h in enumerate(self.genera))

    def is_pseudostable(self) -> bool:
        if not self.is_stable():
            return False
        for v, h in enumerate(self.genera):
            if h == 1 and self.valence(v) < 2:
                return False
            if h == 0 and self.valence(v) == 3 and self.loops_at(v):
                return False
        return True

    def is_weighted_stable(self, weights: Sequence) -> bool:
        '''
        stability for Hassett weights: every vertex needs
        `2h - 2 + (edge half-edges) + (sum of its leg weights) > 0`
        '''
        omega = check_weights(self.genus(), weights, self.n_legs)
        for v, h in enumerate(self.genera):
            weighted = len(self.half_edges_at(v)) + \
                sum((omega[label - 1] for label in self.legs_at(v)),
                    Rational(0))
            if 2 * h - 2 + weighted <= 0:
                return False
        return True

    def contract_edges(self, edges: Iterable[int]) -> 'DualGraph':
        '''
        contract a set of edges at once. Remaining edges keep their
        relative order; merged vertices are numbered by their smallest
        original vertex.
        '''
        contracted = set(edges)
        if not contracted <= set(range(self.n_edges)):
            raise InvalidGraphError(
                f"cannot contract {sorted(contracted)} in {self}")

        helper = nx.MultiGraph()
        helper.add_nodes_from(range(self.n_vertices))
        helper.add_edges_from(self.edges[e] for e in contracted)
        components = sorted(sorted(c) for c in nx.connected_components(helper))

        new_index: dict[int, int] = {}
        genera = []
        for i, component in enumerate(components):
            for v in component:
                new_index[v] = i
            inner = sum(1 for e in contracted
                        if self.edges[e][0] in component)
            genera.append(sum(self.genera[v] for v in component)
                          + inner - len(component) + 1)

        kept = [(new_index[a], new_index[b])
                for e, (a, b) in enumerate(self.edges) if e not in contracted]
        return DualGraph(tuple(genera), tuple(kept),
                         tuple(new_index[v] for v in self.legs))

    def contract_edge(self, edge: int) -> 'DualGraph':
        return self.contract_edges((edge,))

    def to_networkx(self) -> nx.MultiGraph:
        '''the underlying multigraph, with genus and legs as node data'''
        graph = nx.MultiGraph()
        for v, h in enumerate(self.genera):
            graph.add_node(v, genus=h, legs=tuple(self.legs_at(v)))
        for e, (a, b) in enumerate(self.edges):
            graph.add_edge(a, b, key=e)
        return graph

    def __str__(self) -> str:
        vertices = ", ".join(
            f"v{v}(g={h}" + (f", legs={self.legs_at(v)}" if self.legs_at(v) else "") + ")"
            for v, h in enumerate(self.genera))
        edges = ", ".join(f"{a}-{b}" for a, b in self.edges)
        return f"[{vertices}; edges: {edges or 'none'}]"


EXCLUDED_RANGE = frozenset({(1, 0), (1, 1), (2, 0)})


def check_admitted_range(genus: int, n_legs: int) -> None:
    '''(g, n) must have g > 0 and avoid (1, 0), (1, 1) and (2, 0)'''
    if genus <= 0 or n_legs < 0 or (genus, n_legs) in EXCLUDED_RANGE:
        raise OutOfRangeError(f"(g, n) = ({genus}, {n_legs}) is outside "
                              f"the admitted range")


def check_weights(genus: int, weights: Sequence, n_legs: int) -> tuple[Rational, ...]:
    '''validate a Hassett weight vector and return it as exact rationals'''
    omega = tuple(Rational(w) for w in weights)
    if len(omega) != n_legs:
        raise OutOfRangeError(
            f"expected {n_legs} weights, got {len(omega)}")
    if any(not (0 < w <= 1) for w in omega):
        raise OutOfRangeError(f"weights must lie in (0, 1], got {omega}")
    if 2 * genus - 2 + sum(omega, Rational(0)) <= 0:
        raise OutOfRangeError(
            f"2g - 2 + sum of weights must be positive for g={genus}")
    return omega


@dataclass(frozen=True)
class TropicalCurve:
    '''a dual graph together with strictly positive edge lengths'''
    graph: DualGraph
    lengths: tuple[Rational, ...]

    def __post_init__(self) -> None:
        lengths = tuple(Rational(x) for x in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if len(lengths) != self.graph.n_edges:
            raise InvalidGraphError(
                f"{len(lengths)} lengths given for {self.graph.n_edges} edges")
        if any(x <= 0 for x in lengths):
            raise InvalidGraphError(
                f"edge lengths must be positive, got {lengths}")

    def to_point(self, complex):
        '''the point of `complex` (a ConeComplex) this curve represents'''
        return complex.curve_point(self)


def main():
    graphs = {
        "smooth": DualGraph.smooth(1, 2),
        "rho0": DualGraph((0,), ((0, 0),), (0, 0)),
        "rho1": DualGraph((1, 0), ((0, 1),), (1, 1)),
        "banana": DualGraph((0, 0), ((0, 1), (0, 1)), (0, 1)),
        "loop+tail": DualGraph((0, 0), ((0, 0), (0, 1)), (1, 1)),
    }
    for name, graph in graphs.items():
        print(f"{name:10s} {graph}  genus={graph.genus()} "
              f"stable={graph.is_stable()} ps={graph.is_pseudostable()} "
              f"light={graph.is_weighted_stable((LIGHT_WEIGHT,) * 2)}")


if __name__ == "__main__":
    main()
