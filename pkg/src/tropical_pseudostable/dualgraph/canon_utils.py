import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.errors import InvalidGraphError

__all__ = [
    "AutGroup",
    "CanonicalLabeling",
    "canonical_form",
    "automorphisms",
    "are_isomorphic",
    "relabel",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanonicalLabeling:
    '''
    the canonical representative of a graph's isomorphism class, together
    with the isomorphism from the input graph onto it
    '''
    graph: DualGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    half_edge_map: tuple[int, ...]

    @property
    def key(self) -> tuple:
        '''encoding that is equal for two graphs iff they are isomorphic'''
        return graph_key(self.graph)


@dataclass(frozen=True)
class AutGroup:
    '''
    automorphisms acting on half-edges. `half_edge_perms[j][h]` is the image
    of the half-edge `h` under the j-th automorphism; the identity comes first
    '''
    half_edge_perms: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.half_edge_perms)

    @property
    def edge_action(self) -> tuple[tuple[int, ...], ...]:
        '''distinct induced permutations of the edges, identity first'''
        seen: dict[tuple[int, ...], None] = {}
        for perm in self.half_edge_perms:
            seen.setdefault(tuple(perm[2 * e] // 2
                                  for e in range(len(perm) // 2)), None)
        return tuple(seen)

    @property
    def folded(self) -> bool:
        return len(self.edge_action) > 1


def graph_key(graph: DualGraph) -> tuple:
    return (graph.genera, graph.legs, graph.edges)


def _refined_colors(graph: DualGraph) -> list[int]:
    '''
    iterated colour refinement of the vertices, seeded by genus, legs,
    loops and valence. Isomorphisms preserve the result.
    '''
    signatures = [(h, tuple(graph.legs_at(v)), len(graph.loops_at(v)),
                   graph.valence(v))
                  for v, h in enumerate(graph.genera)]
    colors = _relabel_signatures(signatures)

    while True:
        neighbours: list[Counter] = [Counter() for _ in graph.genera]
        for a, b in graph.edges:
            if a != b:
                neighbours[a][colors[b]] += 1
                neighbours[b][colors[a]] += 1
        signatures = [(colors[v], tuple(sorted(neighbours[v].items())))
                      for v in range(graph.n_vertices)]
        refined = _relabel_signatures(signatures)
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined


def _relabel_signatures(signatures: Sequence) -> list[int]:
    index = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [index[s] for s in signatures]


def _color_class_orderings(colors: list[int]):
    '''all vertex orderings that list colour classes in colour order'''
    classes = defaultdict(list)
    for v, c in enumerate(colors):
        classes[c].append(v)
    blocks = [classes[c] for c in sorted(classes)]
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        yield [v for block in choice for v in block]


def _mapped_edges(graph: DualGraph, position: Sequence[int]) -> tuple:
    return tuple(sorted(tuple(sorted((position[a], position[b])))
                        for a, b in graph.edges))


@lru_cache(maxsize=None)
def canonical_form(graph: DualGraph) -> CanonicalLabeling:
    '''
    minimal relabelling over all vertex orderings compatible with the
    refined colouring; parallel edges are matched in order
    '''
    colors = _refined_colors(graph)
    best_key = None
    best_position = None
    for ordering in _color_class_orderings(colors):
        position = [0] * graph.n_vertices
        for i, v in enumerate(ordering):
            position[v] = i
        key = (tuple(graph.genera[v] for v in ordering),
               tuple(position[v] for v in graph.legs),
               _mapped_edges(graph, position))
        if best_key is None or key < best_key:
            best_key, best_position = key, position

    genera, legs, edges = best_key
    canonical = DualGraph(genera, edges, legs)

    free = defaultdict(list)
    for k, pair in enumerate(edges):
        free[pair].append(k)
    edge_map = []
    half_edge_map = [0] * (2 * graph.n_edges)
    for e, (a, b) in enumerate(graph.edges):
        pa, pb = best_position[a], best_position[b]
        k = free[tuple(sorted((pa, pb)))].pop(0)
        edge_map.append(k)
        if pa == edges[k][0]:
            half_edge_map[2 * e], half_edge_map[2 * e + 1] = 2 * k, 2 * k + 1
        else:
            half_edge_map[2 * e], half_edge_map[2 * e + 1] = 2 * k + 1, 2 * k

    return CanonicalLabeling(canonical, tuple(best_position),
                             tuple(edge_map), tuple(half_edge_map))


def are_isomorphic(first: DualGraph, second: DualGraph) -> bool:
    return canonical_form(first).key == canonical_form(second).key


@lru_cache(maxsize=None)
def automorphisms(graph: DualGraph) -> AutGroup:
    '''
    all half-edge permutations that fix genera and leg labels and commute
    with the edge pairing
    '''
    colors = _refined_colors(graph)
    edge_multiset = _mapped_edges(graph, range(graph.n_vertices))

    by_pair = defaultdict(list)
    for e, (a, b) in enumerate(graph.edges):
        by_pair[tuple(sorted((a, b)))].append(e)

    perms = []
    for ordering in _color_class_orderings(colors):
        # the ordering lists images: vertex blocks[i] -> ordering[i]
        sigma = [0] * graph.n_vertices
        for source, target in zip(_identity_ordering(colors), ordering):
            sigma[source] = target
        if any(sigma[v] != v for v in graph.legs):
            continue
        if _mapped_edges(graph, sigma) != edge_multiset:
            continue
        perms.extend(_half_edge_lifts(graph, sigma, by_pair))

    perms.sort(key=lambda p: p != tuple(range(2 * graph.n_edges)))
    logger.debug(f"|Aut| = {len(perms)} for {graph}")
    return AutGroup(tuple(perms))


def _identity_ordering(colors: list[int]) -> list[int]:
    return [v for c in sorted(set(colors)) for v, cv in enumerate(colors) if cv == c]


def _half_edge_lifts(graph: DualGraph, sigma: list[int], by_pair: dict):
    '''every half-edge permutation inducing the vertex permutation `sigma`'''
    pairs = sorted(by_pair)
    choices = []
    for pair in pairs:
        target = tuple(sorted((sigma[pair[0]], sigma[pair[1]])))
        choices.append([list(zip(by_pair[pair], image))
                        for image in itertools.permutations(by_pair[target])])

    loops = [e for e in range(graph.n_edges) if graph.is_loop(e)]
    for matching in itertools.product(*choices):
        edge_image = dict(m for block in matching for m in block)
        base = [0] * (2 * graph.n_edges)
        for e, (a, b) in enumerate(graph.edges):
            k = edge_image[e]
            if a != b and sigma[a] != graph.edges[k][0]:
                base[2 * e], base[2 * e + 1] = 2 * k + 1, 2 * k
            else:
                base[2 * e], base[2 * e + 1] = 2 * k, 2 * k + 1
        for flips in itertools.product((False, True), repeat=len(loops)):
            perm = list(base)
            for e, flip in zip(loops, flips):
                if flip:
                    perm[2 * e], perm[2 * e + 1] = perm[2 * e + 1], perm[2 * e]
            yield tuple(perm)


def relabel(graph: DualGraph, vertex_perm: Sequence[int],
            edge_order: Sequence[int], flips: Sequence[bool] = ()) -> DualGraph:
    '''
    an isomorphic copy: vertex `v` becomes `vertex_perm[v]`, the new edge `k`
    is the old edge `edge_order[k]`, reversed when `flips[k]` is set
    '''
    if sorted(vertex_perm) != list(range(graph.n_vertices)) or \
            sorted(edge_order) != list(range(graph.n_edges)):
        raise InvalidGraphError("relabelling must be given by permutations")
    flips = tuple(flips) or (False,) * graph.n_edges
    genera = [0] * graph.n_vertices
    for v, h in enumerate(graph.genera):
        genera[vertex_perm[v]] = h
    edges = []
    for k, e in enumerate(edge_order):
        a, b = graph.edges[e]
        pair = (vertex_perm[a], vertex_perm[b])
        edges.append(pair[::-1] if flips[k] else pair)
    return DualGraph(tuple(genera), tuple(edges),
                     tuple(vertex_perm[v] for v in graph.legs))


def main():
    banana = DualGraph((0, 0), ((0, 1), (1, 0)), (1, 0))
    swapped = relabel(banana, (1, 0), (1, 0), (True, False))
    rho0 = DualGraph((0,), ((0, 0),), (0, 0))
    for graph in (banana, swapped, rho0):
        labeling = canonical_form(graph)
        aut = automorphisms(graph)
        print(f"{graph} -> {labeling.graph}, |Aut|={aut.order}, "
              f"edge action={aut.edge_action}")
    print(f"isomorphic: {are_isomorphic(banana, swapped)}")


if __name__ == "__main__":
    main()
