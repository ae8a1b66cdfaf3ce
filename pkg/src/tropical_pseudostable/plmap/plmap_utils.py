import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex, ConePoint
from tropical_pseudostable.complex.enumeration import (
    DEFAULT_EDGE_BOUND, LIGHT_WEIGHT, check_edge_bound, enumerate_stable, enumerate_weighted,
    light_weights)
from tropical_pseudostable.dualgraph.canon_utils import canonical_form
from tropical_pseudostable.dualgraph.moves import CONTRACTION_SLOPE, pseudostabilize
from tropical_pseudostable.errors import IncompatibleFunctionError, MapConstructionError
from tropical_pseudostable.pwpoly.pp_utils import PiecewisePoly, substitute_linear

__all__ = [
    "ConeAssignment",
    "PLMap",
    "build_trop_T",
    "build_hassett_pi",
    "TropicalModuli",
    "HassettModuli",
    "tropical_moduli",
    "hassett_moduli",
]

GENERIC_COORDS = (2, 3, 5, 7, 11, 13, 17)


@dataclass(frozen=True)
class ConeAssignment:
    '''
    where a source cone goes: `matrix` has one row per coordinate of the
    target cone and one column per coordinate of the source cone
    '''
    target: int
    matrix: np.ndarray


class PLMap:
    '''
    piecewise-linear map of cone complexes, linear with non-negative
    integral coefficients on every cone
    '''

    def __init__(self, source: ConeComplex, target: ConeComplex,
                 assignments: Sequence[ConeAssignment], name: str = "",
                 check: bool = True) -> None:
        self._logger = logging.getLogger(self.__class__.__name__)
        self._source = source
        self._target = target
        self._assignments = tuple(assignments)
        self._name = name
        if len(self._assignments) != len(source):
            raise MapConstructionError(
                f"{len(self._assignments)} assignments for {len(source)} cones")
        if check:
            self.verify()

    @property
    def source(self) -> ConeComplex:
        return self._source

    @property
    def target(self) -> ConeComplex:
        return self._target

    @property
    def name(self) -> str:
        return self._name

    @property
    def assignments(self) -> tuple[ConeAssignment, ...]:
        return self._assignments

    def __getitem__(self, cone_id: int) -> ConeAssignment:
        return self._assignments[cone_id]

    def _image(self, cone_id: int, coords: Sequence) -> ConePoint:
        assignment = self._assignments[cone_id]
        image = [sum((int(a) * Rational(x) for a, x in zip(row, coords)), Rational(0))
                 for row in assignment.matrix]
        return self._target.point(assignment.target, image)

    def verify(self) -> None:
        '''
        check shapes, integrality and sign of every matrix, and that the map
        is compatible with automorphisms and with every codimension-one face
        '''
        for cone, assignment in zip(self._source, self._assignments):
            shape = (self._target[assignment.target].dim, cone.dim)
            matrix = assignment.matrix
            if matrix.shape != shape:
                raise MapConstructionError(
                    f"cone {cone.id}: matrix of shape {matrix.shape}, expected {shape}")
            if not np.issubdtype(matrix.dtype, np.integer) or (matrix < 0).any():
                raise MapConstructionError(
                    f"cone {cone.id}: matrix is not non-negative integral")

            generic = GENERIC_COORDS[:cone.dim]
            image = self._image(cone.id, generic)
            for perm in cone.aut.edge_action[1:]:
                permuted = [0] * cone.dim
                for e, x in enumerate(generic):
                    permuted[perm[e]] = x
                if self._image(cone.id, permuted) != image:
                    raise MapConstructionError(
                        f"cone {cone.id}: image depends on the automorphism {perm}")

            for face in self._source.facets(cone.id):
                face_coords = GENERIC_COORDS[:len(face.kept)]
                embedded = [0] * cone.dim
                for source, target in zip(face.kept, face.injection):
                    embedded[source] = face_coords[target]
                if self._image(cone.id, embedded) != self._image(face.target, face_coords):
                    raise MapConstructionError(
                        f"cone {cone.id} and its face {face.target} disagree")
        self._logger.info(f"verified {self._name or 'map'} on {len(self._source)} cones")

    def apply(self, cone_id: int, coords: Sequence) -> ConePoint:
        '''image of a point given in the coordinates of a source cone'''
        point = self._source.point(cone_id, coords)
        return self._image(point.cone, point.coords)

    def ray_image(self, ray_id: int) -> tuple[int, Rational]:
        '''target cone and multiplier of the primitive generator of a ray'''
        point = self.apply(ray_id, (1,))
        multiplier = point.coords[0] if point.coords else Rational(0)
        return point.cone, multiplier

    def pullback(self, f: PiecewisePoly) -> PiecewisePoly:
        if f.complex is not self._target:
            raise IncompatibleFunctionError(
                "pullback of a function that does not live on the target complex")
        pieces = [substitute_linear(f[assignment.target], assignment.matrix, cone.dim)
                  for cone, assignment in zip(self._source, self._assignments)]
        return PiecewisePoly(self._source, pieces)

    def __repr__(self) -> str:
        return f"PLMap({self._name}, {self._source!r} -> {self._target!r})"


def _reordered(matrix: np.ndarray, edge_map: Sequence[int]) -> np.ndarray:
    '''move row `k` to row `edge_map[k]`'''
    result = np.zeros_like(matrix)
    for k, row in enumerate(matrix):
        result[edge_map[k]] = row
    return result


def build_trop_T(stable: ConeComplex, ps: ConeComplex) -> PLMap:
    '''
    the contraction of elliptic tails: identity off the open star of rho1,
    and on the star the transfer data of pseudostabilization
    '''
    labels = stable.rays_by_label()
    star = stable.open_star(labels["rho1"]) if "rho1" in labels else frozenset()
    expected = {c.key for c in stable if c.id not in star}
    if {cone.key for cone in ps} != expected:
        raise MapConstructionError(
            "the pseudostable complex is not the complement of the open star of rho1")

    assignments = []
    for cone in stable:
        if cone.id not in star:
            assignments.append(ConeAssignment(
                ps.cone_of(cone.graph), np.eye(cone.dim, dtype=np.int64)))
            continue
        result = pseudostabilize(cone.graph)
        labeling = canonical_form(result.graph)
        assignments.append(ConeAssignment(
            ps.cone_of(labeling.graph), _reordered(result.transfer, labeling.edge_map)))

    trop_T = PLMap(stable, ps, assignments, name="trop(T)")
    for ray in stable.rays:
        target, multiplier = trop_T.ray_image(ray)
        if stable.ray_label(ray) == "rho1":
            wanted = (ps.find("rho0"), CONTRACTION_SLOPE)
        else:
            wanted = (ps.cone_of(stable[ray].graph), 1)
        if (target, multiplier) != wanted:
            raise MapConstructionError(
                f"ray {stable.ray_label(ray)} goes to {(target, multiplier)}, "
                f"expected {wanted}")
    return trop_T


def build_hassett_pi(stable: ConeComplex, weighted: ConeComplex) -> PLMap:
    '''
    the reduction map to light weights: every edge whose ray is not
    weighted-stable is contracted
    '''
    if weighted.weights is None:
        raise MapConstructionError("the target complex carries no weights")
    unstable_rays = {ray for ray in stable.rays
                     if not stable[ray].graph.is_weighted_stable(weighted.weights)}

    assignments = []
    for cone in stable:
        contracted = [e for e, ray in enumerate(stable.edge_rays(cone.id))
                      if ray in unstable_rays]
        kept = [e for e in range(cone.dim) if e not in contracted]
        reduced = cone.graph.contract_edges(contracted)
        if not reduced.is_weighted_stable(weighted.weights):
            raise MapConstructionError(
                f"contracting the light edges of {cone.graph} gives the unstable {reduced}")
        labeling = canonical_form(reduced)
        matrix = np.zeros((reduced.n_edges, cone.dim), dtype=np.int64)
        for i, e in enumerate(kept):
            matrix[labeling.edge_map[i], e] = 1
        assignments.append(ConeAssignment(weighted.cone_of(labeling.graph), matrix))

    return PLMap(stable, weighted, assignments, name="trop(pi)")


@dataclass(frozen=True)
class TropicalModuli:
    stable: ConeComplex
    pseudostable: ConeComplex
    trop_T: PLMap


@dataclass(frozen=True)
class HassettModuli:
    stable: ConeComplex
    weighted: ConeComplex
    trop_pi: PLMap


def tropical_moduli(genus: int, n_legs: int,
                    edge_bound: int = DEFAULT_EDGE_BOUND) -> TropicalModuli:
    '''
    the shared bundle of (g, n); `edge_bound` only gates which (g, n) are
    accepted, so every admitted call returns the same objects
    '''
    check_edge_bound(genus, n_legs, edge_bound)
    return _tropical_moduli(int(genus), int(n_legs))


@lru_cache(maxsize=None)
def _tropical_moduli(genus: int, n_legs: int) -> TropicalModuli:
    stable = enumerate_stable(genus, n_legs, 3 * genus - 3 + n_legs)
    ps = stable.pseudostable_subcomplex()
    return TropicalModuli(stable, ps, build_trop_T(stable, ps))


def hassett_moduli(genus: int, n_legs: int, epsilon=LIGHT_WEIGHT,
                   edge_bound: int = DEFAULT_EDGE_BOUND) -> HassettModuli:
    check_edge_bound(genus, n_legs, edge_bound)
    return _hassett_moduli(int(genus), int(n_legs), Rational(epsilon))


@lru_cache(maxsize=None)
def _hassett_moduli(genus: int, n_legs: int, epsilon: Rational) -> HassettModuli:
    stable = _tropical_moduli(genus, n_legs).stable
    weighted = enumerate_weighted(genus, n_legs, light_weights(n_legs, epsilon),
                                  3 * genus - 3 + n_legs)
    return HassettModuli(stable, weighted, build_hassett_pi(stable, weighted))


def main():
    logging.basicConfig(level=logging.INFO)
    moduli = tropical_moduli(1, 2)
    stable, trop_T = moduli.stable, moduli.trop_T
    loop_tail = stable.find("loop+tail")
    point = trop_T.apply(loop_tail, (1, 1))
    print(f"trop(T)(loop+tail, (1, 1)) = {moduli.pseudostable.cone_name(point.cone)} "
          f"{point.coords}")
    for ray in stable.rays:
        target, multiplier = trop_T.ray_image(ray)
        print(f"{stable.ray_label(ray)} -> {moduli.pseudostable.cone_name(target)} x {multiplier}")


if __name__ == "__main__":
    main()
