import numpy as np
import pytest

from tropical_pseudostable.complex.enumeration import stable_graphs
from tropical_pseudostable.dualgraph.canon_utils import automorphisms, canonical_form
from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.dualgraph.moves import (
    CONTRACTION_SLOPE, TailMove, apply_move, find_moves, has_tail_configuration,
    pseudostabilize)
from tropical_pseudostable.errors import PseudostabilizationError

RHO0 = DualGraph((0,), ((0, 0),), (0, 0))
TWO_TAILS = DualGraph((0, 1, 0), ((0, 1), (0, 2), (2, 2)), (0,))


def _canonical_lengths(result, lengths):
    '''edge lengths of the output, moved to canonical coordinates up to automorphisms'''
    labeling = canonical_form(result.graph)
    image = result.transfer @ np.array(lengths, dtype=np.int64)
    coords = [0] * result.graph.n_edges
    for e, x in enumerate(image):
        coords[labeling.edge_map[e]] = int(x)
    orbit = []
    for perm in automorphisms(labeling.graph).edge_action:
        moved = [0] * len(coords)
        for e, x in enumerate(coords):
            moved[perm[e]] = x
        orbit.append(tuple(moved))
    return labeling.key, min(orbit)


def test_find_moves(loop_and_tail, elliptic_tail, banana):
    assert find_moves(elliptic_tail) == [TailMove("E1", 0, 0, 1)]
    assert find_moves(loop_and_tail) == [TailMove("E2", 0, 1, 1, 0)]
    assert find_moves(banana) == []
    assert has_tail_configuration(loop_and_tail)
    assert not has_tail_configuration(RHO0)


def test_elliptic_tail_becomes_a_loop(elliptic_tail):
    result = pseudostabilize(elliptic_tail)
    assert result.graph == RHO0
    assert result.transfer.tolist() == [[CONTRACTION_SLOPE]]
    assert not result.is_identity


def test_loop_tail_becomes_a_loop(loop_and_tail):
    result = pseudostabilize(loop_and_tail)
    assert result.graph == RHO0
    assert result.transfer.tolist() == [[1, 12]]
    assert [move.kind for move in result.moves] == ["E2"]


def test_apply_move_keeps_other_edges():
    graph, transfer = apply_move(TWO_TAILS, find_moves(TWO_TAILS)[0])
    assert graph == DualGraph((0, 0), ((0, 1), (1, 1), (0, 0)), (0,))
    assert transfer.tolist() == [[0, 1, 0], [0, 0, 1], [12, 0, 0]]


def test_pseudostable_graphs_are_fixed(banana):
    result = pseudostabilize(banana)
    assert result.is_identity
    assert result.graph == banana
    assert np.array_equal(result.transfer, np.eye(2, dtype=np.int64))


def test_unstable_graph():
    with pytest.raises(PseudostabilizationError):
        pseudostabilize(DualGraph((1, 0), ((0, 1),), (0, 0)))


def test_excluded_range():
    with pytest.raises(PseudostabilizationError):
        pseudostabilize(DualGraph((0,), ((0, 0),), (0,)))


def test_order_of_moves_does_not_matter():
    first = pseudostabilize(TWO_TAILS)
    last = pseudostabilize(TWO_TAILS, pick=lambda moves: moves[-1])
    assert [m.kind for m in first.moves] == ["E1", "E2"]
    assert [m.kind for m in last.moves] == ["E2", "E1"]
    assert _canonical_lengths(first, (2, 3, 5)) == _canonical_lengths(last, (2, 3, 5))
    assert sorted(first.transfer @ np.array((2, 3, 5))) == [24, 41]


@pytest.mark.parametrize("genus, n_legs", [(1, 2), (1, 3), (1, 4)])
def test_pseudostabilize_properties(genus, n_legs):
    for graph in stable_graphs(genus, n_legs):
        result = pseudostabilize(graph)
        assert result.graph.is_pseudostable()
        assert result.graph.genus() == genus
        assert result.graph.n_legs == n_legs
        assert pseudostabilize(result.graph).is_identity
        assert result.transfer.shape == (result.graph.n_edges, graph.n_edges)
        assert (result.transfer >= 0).all()


@pytest.mark.parametrize("genus, n_legs", [
    (2, 1),
    (2, 2),
    pytest.param(2, 3, marks=pytest.mark.slow),
    pytest.param(2, 4, marks=pytest.mark.slow),
])
def test_confluence(genus, n_legs):
    lengths = (2, 3, 5, 7, 11, 13, 17)
    for graph in stable_graphs(genus, n_legs):
        first = pseudostabilize(graph)
        last = pseudostabilize(graph, pick=lambda moves: moves[-1])
        generic = lengths[:graph.n_edges]
        assert _canonical_lengths(first, generic) == _canonical_lengths(last, generic)
        assert first.graph.is_pseudostable()
        assert first.graph.genus() == genus
        assert pseudostabilize(first.graph).is_identity
        assert canonical_form(pseudostabilize(first.graph).graph).key == \
            canonical_form(first.graph).key
