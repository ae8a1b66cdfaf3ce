import random

import pytest

from tropical_pseudostable.complex.enumeration import stable_graphs
from tropical_pseudostable.dualgraph.canon_utils import (
    are_isomorphic, automorphisms, canonical_form, relabel)
from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.errors import InvalidGraphError


def _random_relabel(graph: DualGraph, rng: random.Random) -> DualGraph:
    vertex_perm = list(range(graph.n_vertices))
    edge_order = list(range(graph.n_edges))
    rng.shuffle(vertex_perm)
    rng.shuffle(edge_order)
    flips = [rng.random() < 0.5 for _ in edge_order]
    return relabel(graph, vertex_perm, edge_order, flips)


def test_relabel_swaps_vertices(banana):
    swapped = relabel(banana, (1, 0), (1, 0), (True, False))
    assert swapped.legs == (1, 0)
    assert swapped != banana
    assert are_isomorphic(banana, swapped)


def test_relabel_rejects_non_permutations(banana):
    with pytest.raises(InvalidGraphError):
        relabel(banana, (0, 0), (0, 1))


def test_non_isomorphic(loop_and_tail, banana, elliptic_tail):
    assert not are_isomorphic(loop_and_tail, banana)
    assert not are_isomorphic(elliptic_tail, DualGraph((1, 0), ((0, 1),), (0, 1)))


def test_legs_are_labelled():
    first = DualGraph((1, 0), ((0, 1),), (0, 1, 1))
    second = DualGraph((1, 0), ((0, 1),), (1, 0, 1))
    assert not are_isomorphic(first, second)


def test_canonical_form_is_an_isomorphism(loop_and_tail):
    graph = relabel(loop_and_tail, (1, 0), (1, 0), (True, True))
    labeling = canonical_form(graph)
    canonical = labeling.graph
    for v, h in enumerate(graph.genera):
        assert canonical.genera[labeling.vertex_map[v]] == h
    for label, v in enumerate(graph.legs):
        assert canonical.legs[label] == labeling.vertex_map[v]
    for h in range(2 * graph.n_edges):
        image = labeling.half_edge_map[h]
        assert image // 2 == labeling.edge_map[h // 2]
        assert canonical.half_edge_vertex(image) == \
            labeling.vertex_map[graph.half_edge_vertex(h)]


def test_canonical_form_is_idempotent(banana):
    canonical = canonical_form(banana).graph
    assert canonical_form(canonical).graph == canonical


@pytest.mark.parametrize("genus, n_legs", [(1, 2), (1, 3), (1, 4)])
def test_random_relabelling_keeps_the_key(genus, n_legs):
    rng = random.Random(20 * genus + n_legs)
    for graph in stable_graphs(genus, n_legs):
        key = canonical_form(graph).key
        for _ in range(5):
            other = _random_relabel(graph, rng)
            assert canonical_form(other).key == key
            assert automorphisms(other).order == automorphisms(graph).order


@pytest.mark.parametrize("graph, order, folded", [
    (DualGraph((0,), ((0, 0),), (0, 0)), 2, False),
    (DualGraph((0, 0), ((0, 1), (0, 1)), (0, 1)), 2, True),
    (DualGraph((1, 0), ((0, 1),), (1, 1)), 1, False),
    (DualGraph((0, 0), ((0, 0), (0, 1)), (1, 1)), 2, False),
    (DualGraph((0,), ((0, 0), (0, 0)), (0,)), 8, True),
    (DualGraph((0, 0, 0), ((0, 1), (1, 2), (2, 0)), (0, 1, 2)), 1, False),
])
def test_automorphism_groups(graph, order, folded):
    aut = automorphisms(graph)
    assert aut.order == order
    assert aut.folded == folded
    assert aut.half_edge_perms[0] == tuple(range(2 * graph.n_edges))
    assert aut.edge_action[0] == tuple(range(graph.n_edges))


def test_automorphisms_respect_the_edge_pairing():
    graph = DualGraph((0,), ((0, 0), (0, 0)), (0,))
    for perm in automorphisms(graph).half_edge_perms:
        assert sorted(perm) == list(range(4))
        for e in range(graph.n_edges):
            assert perm[2 * e] // 2 == perm[2 * e + 1] // 2


@pytest.mark.parametrize("genus, n_legs", [(1, 3), (1, 4)])
def test_contraction_commutes_with_relabelling(genus, n_legs):
    rng = random.Random(7 * n_legs)
    for graph in stable_graphs(genus, n_legs):
        vertex_perm = list(range(graph.n_vertices))
        edge_order = list(range(graph.n_edges))
        rng.shuffle(vertex_perm)
        rng.shuffle(edge_order)
        other = relabel(graph, vertex_perm, edge_order)
        for k, e in enumerate(edge_order):
            assert are_isomorphic(other.contract_edge(k), graph.contract_edge(e))
