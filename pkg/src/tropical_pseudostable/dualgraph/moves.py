import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from tropical_pseudostable.dualgraph.graph_utils import DualGraph, check_admitted_range
from tropical_pseudostable.errors import OutOfRangeError, PseudostabilizationError

__all__ = [
    "CONTRACTION_SLOPE",
    "TailMove",
    "Pseudostabilization",
    "find_moves",
    "apply_move",
    "pseudostabilize",
    "has_tail_configuration",
]

logger = logging.getLogger(__name__)

CONTRACTION_SLOPE = 12


@dataclass(frozen=True)
class TailMove:
    '''
    a local non-pseudostable configuration. "E1": a legless 1-valent genus-1
    vertex; "E2": a legless 3-valent genus-0 vertex with a loop. `vertex` is
    removed together with `edge` (and `loop` for E2), and a loop is added at
    `anchor`
    '''
    kind: str
    vertex: int
    edge: int
    anchor: int
    loop: int | None = None


@dataclass(frozen=True)
class Pseudostabilization:
    '''
    result of contracting every elliptic tail. Row `k` of `transfer` gives
    the length of edge `k` of `graph` in terms of the source edge lengths
    '''
    source: DualGraph
    graph: DualGraph
    transfer: np.ndarray
    moves: tuple[TailMove, ...]

    @property
    def is_identity(self) -> bool:
        return not self.moves


def find_moves(graph: DualGraph) -> list[TailMove]:
    moves = []
    for u, h in enumerate(graph.genera):
        if graph.legs_at(u):
            continue
        valence = graph.valence(u)
        if h == 1 and valence == 1:
            (half_edge,) = graph.half_edges_at(u)
            e = half_edge // 2
            moves.append(TailMove("E1", u, e, graph.other_end(e, u)))
        elif h == 0 and valence == 3 and len(graph.loops_at(u)) == 1:
            (loop,) = graph.loops_at(u)
            (e,) = [half_edge // 2 for half_edge in graph.half_edges_at(u)
                    if half_edge // 2 != loop]
            moves.append(TailMove("E2", u, e, graph.other_end(e, u), loop))
    return moves


def has_tail_configuration(graph: DualGraph) -> bool:
    return bool(find_moves(graph))


def apply_move(graph: DualGraph, move: TailMove) -> tuple[DualGraph, np.ndarray]:
    '''
    perform one move. Untouched edges keep their order, the new loop at the
    anchor comes last.
    '''
    removed = {move.edge} | ({move.loop} if move.loop is not None else set())
    kept = [e for e in range(graph.n_edges) if e not in removed]

    def shift(v: int) -> int:
        return v - 1 if v > move.vertex else v

    genera = [h for v, h in enumerate(graph.genera) if v != move.vertex]
    anchor = shift(move.anchor)
    edges = [(shift(graph.edges[e][0]), shift(graph.edges[e][1])) for e in kept]
    edges.append((anchor, anchor))
    legs = [shift(v) for v in graph.legs]

    transfer = np.zeros((len(edges), graph.n_edges), dtype=np.int64)
    for row, e in enumerate(kept):
        transfer[row, e] = 1
    transfer[-1, move.edge] = CONTRACTION_SLOPE
    if move.loop is not None:
        transfer[-1, move.loop] = 1

    return DualGraph(tuple(genera), tuple(edges), tuple(legs)), transfer


def pseudostabilize(graph: DualGraph,
                    pick: Callable[[Sequence[TailMove]], TailMove] | None = None
                    ) -> Pseudostabilization:
    '''
    apply E1/E2 moves until the graph is pseudostable. `pick` chooses among
    the currently available moves (the first one by default).
    '''
    try:
        check_admitted_range(graph.genus(), graph.n_legs)
    except OutOfRangeError as e:
        raise PseudostabilizationError(str(e)) from e
    if not graph.is_stable():
        raise PseudostabilizationError(f"{graph} is not stable")

    current = graph
    transfer = np.eye(graph.n_edges, dtype=np.int64)
    applied = []
    while moves := find_moves(current):
        move = pick(moves) if pick is not None else moves[0]
        current, step = apply_move(current, move)
        transfer = step @ transfer
        applied.append(move)
        logger.debug(f"{move.kind} at vertex {move.vertex} -> {current}")

    if not current.is_pseudostable():
        raise PseudostabilizationError(
            f"no move applies but {current} is not pseudostable")
    return Pseudostabilization(graph, current, transfer, tuple(applied))


def main():
    logging.basicConfig(level=logging.DEBUG)
    loop_and_tail = DualGraph((0, 0), ((0, 0), (0, 1)), (1, 1))
    result = pseudostabilize(loop_and_tail)
    print(f"{result.source} -> {result.graph}")
    print(result.transfer)


if __name__ == "__main__":
    main()
