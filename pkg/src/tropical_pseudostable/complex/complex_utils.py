import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from sympy import Rational

from tropical_pseudostable.dualgraph.canon_utils import (
    AutGroup, automorphisms, canonical_form, graph_key)
from tropical_pseudostable.dualgraph.graph_utils import DualGraph, TropicalCurve
from tropical_pseudostable.errors import InvalidGraphError, UnknownConeError

__all__ = [
    "Cone",
    "FaceMap",
    "ConePoint",
    "ConeComplex",
    "same_cone_invariants",
]


@dataclass(frozen=True)
class Cone:
    '''one cone per isomorphism class; coordinates are the canonical edges'''
    id: int
    graph: DualGraph
    aut: AutGroup

    @property
    def dim(self) -> int:
        return self.graph.n_edges

    @property
    def folded(self) -> bool:
        return self.aut.folded

    @property
    def key(self) -> tuple:
        return graph_key(self.graph)


@dataclass(frozen=True)
class FaceMap:
    '''
    the face of `source` obtained by contracting every edge not in `kept`.
    Source coordinate `kept[i]` becomes target coordinate `injection[i]`
    '''
    source: int
    target: int
    kept: tuple[int, ...]
    injection: tuple[int, ...]


@dataclass(frozen=True)
class ConePoint:
    '''a point in the relative interior of a cone, in canonical coordinates'''
    cone: int
    coords: tuple[Rational, ...]


class ConeComplex:
    '''
    generalized cone complex of a family of dual graphs of genus `genus`
    with `n_legs` legs, closed under edge contraction
    '''

    def __init__(self, genus: int, n_legs: int, graphs: Iterable[DualGraph],
                 kind: str = "stable", weights: Sequence | None = None,
                 parent: 'ConeComplex | None' = None) -> None:
        self._logger = logging.getLogger(self.__class__.__name__)
        self._genus = genus
        self._n_legs = n_legs
        self._kind = kind
        self._weights = tuple(weights) if weights is not None else None
        self._parent = parent

        canonical = {}
        for graph in graphs:
            labeling = canonical_form(graph)
            canonical.setdefault(labeling.key, labeling.graph)
        ordered = sorted(canonical.items(),
                         key=lambda item: (item[1].n_edges, item[0]))
        self._cones = tuple(Cone(i, graph, automorphisms(graph))
                            for i, (_, graph) in enumerate(ordered))
        self._index = {cone.key: cone.id for cone in self._cones}
        self._faces: dict[tuple[int, tuple[int, ...]], FaceMap] = {}
        self._signatures: dict[int, tuple] = {}

        self._check()
        self._logger.info(f"built {kind} complex of ({genus}, {n_legs}): "
                          f"dims {self.dims}, total {len(self)}")

    def _check(self) -> None:
        if self.dims[:1] != [1]:
            raise InvalidGraphError(
                f"a cone complex needs exactly one 0-cone, got dims {self.dims}")
        for cone in self._cones:
            if cone.graph.genus() != self._genus or \
                    cone.graph.n_legs != self._n_legs:
                raise InvalidGraphError(
                    f"{cone.graph} does not have type ({self._genus}, {self._n_legs})")
            for e in range(cone.dim):
                contracted = canonical_form(cone.graph.contract_edge(e))
                if contracted.key not in self._index:
                    raise InvalidGraphError(
                        f"contracting edge {e} of {cone.graph} leaves the complex")

    @property
    def genus(self) -> int:
        return self._genus

    @property
    def n_legs(self) -> int:
        return self._n_legs

    @property
    def kind(self) -> str:
        '''"stable", "pseudostable" or "weighted"'''
        return self._kind

    @property
    def weights(self) -> tuple | None:
        return self._weights

    @property
    def parent(self) -> 'ConeComplex | None':
        '''the complex this one was cut out of, if any'''
        return self._parent

    @property
    def cones(self) -> tuple[Cone, ...]:
        return self._cones

    @property
    def dims(self) -> list[int]:
        '''number of cones in each dimension'''
        top = max(cone.dim for cone in self._cones)
        counts = Counter(cone.dim for cone in self._cones)
        return [counts[d] for d in range(top + 1)]

    @property
    def origin(self) -> int:
        return 0

    @property
    def rays(self) -> list[int]:
        return [cone.id for cone in self._cones if cone.dim == 1]

    def __len__(self) -> int:
        return len(self._cones)

    def __iter__(self) -> Iterator[Cone]:
        return iter(self._cones)

    def __getitem__(self, cone_id: int) -> Cone:
        return self._cones[cone_id]

    def __contains__(self, graph: DualGraph) -> bool:
        return canonical_form(graph).key in self._index

    def cone_of(self, graph: DualGraph) -> int:
        try:
            return self._index[canonical_form(graph).key]
        except KeyError:
            raise UnknownConeError(f"{graph} is not a cone of this complex") from None

    def face(self, cone_id: int, kept: Iterable[int]) -> FaceMap:
        kept = tuple(sorted(kept))
        cache_key = (cone_id, kept)
        if cache_key not in self._faces:
            graph = self._cones[cone_id].graph
            contracted = [e for e in range(graph.n_edges) if e not in kept]
            labeling = canonical_form(graph.contract_edges(contracted))
            self._faces[cache_key] = FaceMap(
                cone_id, self._index[labeling.key], kept, labeling.edge_map)
        return self._faces[cache_key]

    def facets(self, cone_id: int) -> list[FaceMap]:
        '''codimension-one faces, one per contracted edge'''
        dim = self._cones[cone_id].dim
        return [self.face(cone_id, [k for k in range(dim) if k != e])
                for e in range(dim)]

    def face_maps(self) -> Iterator[FaceMap]:
        for cone in self._cones:
            for size in range(cone.dim + 1):
                for kept in itertools.combinations(range(cone.dim), size):
                    yield self.face(cone.id, kept)

    def edge_rays(self, cone_id: int) -> tuple[int, ...]:
        '''the ray each coordinate of a cone spans'''
        return tuple(self.face(cone_id, (e,)).target
                     for e in range(self._cones[cone_id].dim))

    def has_face(self, cone_id: int, face_id: int) -> bool:
        size = self._cones[face_id].dim
        return any(self.face(cone_id, kept).target == face_id
                   for kept in itertools.combinations(
                       range(self._cones[cone_id].dim), size))

    def open_star(self, cone_id: int) -> frozenset[int]:
        '''every cone having `cone_id` as a face, itself included'''
        return frozenset(cone.id for cone in self._cones
                         if self.has_face(cone.id, cone_id))

    def ray_label(self, ray_id: int) -> str:
        '''
        "rho0" for the irreducible ray, otherwise "rho(i,{I})" naming the
        side of the separating edge that does not carry the leg 1, with the
        elliptic tail "rho(1,{})" written "rho1"
        '''
        graph = self._cones[ray_id].graph
        if graph.n_edges != 1:
            raise UnknownConeError(f"cone {ray_id} is not a ray")
        if graph.is_loop(0):
            return "rho0"
        sides = [(graph.genera[v], tuple(graph.legs_at(v))) for v in (0, 1)]
        if self._n_legs > 0:
            genus, legs = next(side for side in sides if 1 not in side[1])
        else:
            genus, legs = min(sides)
        if genus == 1 and not legs:
            return "rho1"
        return f"rho({genus},{{{','.join(str(i) for i in legs)}}})"

    def rays_by_label(self) -> dict[str, int]:
        return {self.ray_label(r): r for r in self.rays}

    def find(self, name: str) -> int:
        '''
        resolve a cone name: "c<id>", "origin", a ray label, "banana" (the
        unique 2-cone whose rays are all rho0) or "loop+tail" (the unique
        2-cone spanned by rho0 and rho1)
        '''
        name = name.strip().replace(" ", "")
        if match := re.fullmatch(r"c(\d+)", name):
            cone_id = int(match.group(1))
            if cone_id < len(self._cones):
                return cone_id
        elif name in ("origin", "point"):
            return self.origin
        elif name in ("banana", "loop+tail"):
            return self._structural_cone(name)
        else:
            labels = self.rays_by_label()
            alias = re.sub(r"^rho\((\d+),\{\}\)$", lambda m: "rho1"
                           if m.group(1) == "1" else m.group(0), name)
            if alias in labels:
                return labels[alias]
        raise UnknownConeError(f"no cone named {name!r} in the {self._kind} complex")

    def _structural_cone(self, name: str) -> int:
        labels = self.rays_by_label()
        wanted = {"banana": ("rho0", "rho0"), "loop+tail": ("rho0", "rho1")}[name]
        if any(label not in labels for label in wanted):
            raise UnknownConeError(f"no {name} cone in the {self._kind} complex")
        rays = tuple(sorted(labels[label] for label in wanted))
        matches = [cone.id for cone in self._cones if cone.dim == 2
                   and tuple(sorted(self.edge_rays(cone.id))) == rays]
        if len(matches) != 1:
            raise UnknownConeError(
                f"{len(matches)} cones match {name!r}, the name is ambiguous")
        return matches[0]

    def cone_name(self, cone_id: int) -> str:
        '''the most readable name `find` resolves back to `cone_id`'''
        cone = self._cones[cone_id]
        if cone.dim == 0:
            return "origin"
        if cone.dim == 1:
            return self.ray_label(cone_id)
        for alias in ("banana", "loop+tail"):
            try:
                if self._structural_cone(alias) == cone_id:
                    return alias
            except UnknownConeError:
                pass
        return f"c{cone_id}"

    def point(self, cone_id: int, coords: Sequence) -> ConePoint:
        '''
        canonical form of a point given in the coordinates of a cone:
        zero coordinates move the point to a face and the coordinates are
        made minimal under the cone's automorphisms
        '''
        coords = tuple(Rational(x) for x in coords)
        cone = self._cones[cone_id]
        if len(coords) != cone.dim or any(x < 0 for x in coords):
            raise InvalidGraphError(
                f"{coords} is not a point of the {cone.dim}-dimensional cone {cone_id}")
        kept = [e for e, x in enumerate(coords) if x != 0]
        face = self.face(cone_id, kept)
        target = self._cones[face.target]
        moved = [Rational(0)] * target.dim
        for source, image in zip(face.kept, face.injection):
            moved[image] = coords[source]
        orbit = []
        for perm in target.aut.edge_action:
            image = [Rational(0)] * target.dim
            for e, x in enumerate(moved):
                image[perm[e]] = x
            orbit.append(tuple(image))
        return ConePoint(face.target, min(orbit))

    def curve_point(self, curve: TropicalCurve) -> ConePoint:
        labeling = canonical_form(curve.graph)
        coords = [Rational(0)] * curve.graph.n_edges
        for e, length in enumerate(curve.lengths):
            coords[labeling.edge_map[e]] = length
        return self.point(self.cone_of(curve.graph), coords)

    def subcomplex(self, cone_ids: Iterable[int], kind: str) -> 'ConeComplex':
        return ConeComplex(self._genus, self._n_legs,
                           (self._cones[i].graph for i in cone_ids),
                           kind=kind, weights=self._weights, parent=self)

    def pseudostable_subcomplex(self) -> 'ConeComplex':
        '''
        the complement of the open star of the elliptic-tail ray, checked
        against the pseudostability predicate
        '''
        labels = self.rays_by_label()
        star = self.open_star(labels["rho1"]) if "rho1" in labels else frozenset()
        kept = [cone.id for cone in self._cones if cone.id not in star]
        predicate = [cone.id for cone in self._cones if cone.graph.is_pseudostable()]
        if kept != predicate:
            raise InvalidGraphError(
                f"star complement {kept} differs from the pseudostable cones {predicate}")
        return self.subcomplex(kept, "pseudostable")

    def signature(self, cone_id: int) -> tuple:
        '''
        isomorphism invariant of a cone inside its complex: dimension, size
        of the edge action and the signatures of its facets
        '''
        if cone_id not in self._signatures:
            cone = self._cones[cone_id]
            facets = sorted(self.signature(f.target) for f in self.facets(cone_id))
            self._signatures[cone_id] = (cone.dim, len(cone.aut.edge_action),
                                         tuple(facets))
        return self._signatures[cone_id]

    def __repr__(self) -> str:
        return (f"ConeComplex({self._kind}, g={self._genus}, n={self._n_legs}, "
                f"dims={self.dims})")


def same_cone_invariants(first: ConeComplex, second: ConeComplex) -> bool:
    '''
    compare recursive cone signatures (dimension, automorphism order, facet
    signatures) with multiplicity. Isomorphic complexes always agree; agreement
    alone does not construct an isomorphism
    '''
    return Counter(first.signature(c.id) for c in first) == \
        Counter(second.signature(c.id) for c in second)
