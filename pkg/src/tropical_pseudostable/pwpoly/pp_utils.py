import itertools
import logging
from functools import lru_cache
from math import prod
from typing import Mapping, Sequence

from sympy import QQ, Rational
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from tropical_pseudostable.complex.complex_utils import ConeComplex, FaceMap
from tropical_pseudostable.errors import IncompatibleFunctionError

__all__ = [
    "coordinate_ring",
    "PiecewisePoly",
    "constant",
    "zero",
    "phi_ray",
    "Phi_ray",
    "phi_cone",
    "extension",
    "strict_support_decomposition",
]

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def coordinate_ring(dim: int) -> PolyRing:
    '''polynomials over QQ in the edge coordinates x0, ..., x(dim-1)'''
    return PolyRing(",".join(f"x{i}" for i in range(dim)), QQ, grlex)


def to_ground(value) -> QQ.dtype:
    return QQ.convert(Rational(value))


def restrict(poly: PolyElement, face: FaceMap, target_dim: int) -> PolyElement:
    '''
    pull a polynomial back from a cone to its face: contracted coordinates
    are set to zero and the kept ones renamed along the face injection
    '''
    kept = set(face.kept)
    terms = {}
    for monom, coeff in poly.items():
        if any(a and e not in kept for e, a in enumerate(monom)):
            continue
        image = [0] * target_dim
        for source, target in zip(face.kept, face.injection):
            image[target] = monom[source]
        terms[tuple(image)] = coeff
    return coordinate_ring(target_dim).from_dict(terms)


def transport(poly: PolyElement, face: FaceMap, source_dim: int) -> PolyElement:
    '''
    the inverse renaming of `restrict`: a polynomial on the face written in
    the coordinates of the larger cone
    '''
    terms = {}
    for monom, coeff in poly.items():
        image = [0] * source_dim
        for source, target in zip(face.kept, face.injection):
            image[source] = monom[target]
        terms[tuple(image)] = coeff
    return coordinate_ring(source_dim).from_dict(terms)


def permute(poly: PolyElement, perm: Sequence[int]) -> PolyElement:
    terms = {}
    for monom, coeff in poly.items():
        image = [0] * len(monom)
        for e, a in enumerate(monom):
            image[perm[e]] = a
        terms[tuple(image)] = coeff
    return poly.ring.from_dict(terms)


def substitute_linear(poly: PolyElement, matrix, source_dim: int) -> PolyElement:
    '''
    `poly(A x)`: target coordinate `j` is replaced by the linear form given
    by row `j` of the integral matrix `A`
    '''
    ring = coordinate_ring(source_dim)
    images = [sum((int(a) * x for a, x in zip(row, ring.gens)), ring.zero)
              for row in matrix]
    result = ring.zero
    for monom, coeff in poly.items():
        term = ring.ground_new(coeff)
        for y, a in zip(images, monom):
            if a:
                term *= y ** a
        result += term
    return result


class PiecewisePoly:
    '''
    a piecewise polynomial on a cone complex: one polynomial per cone,
    invariant under the cone's automorphisms and compatible with faces
    '''

    def __init__(self, complex: ConeComplex,
                 polys: Mapping[int, PolyElement] | Sequence[PolyElement],
                 check: bool = True) -> None:
        self._logger = logging.getLogger(self.__class__.__name__)
        self._complex = complex
        if isinstance(polys, Mapping):
            pieces = [polys.get(c.id) for c in complex]
        else:
            pieces = list(polys)
        if len(pieces) != len(complex):
            raise IncompatibleFunctionError(
                f"{len(pieces)} pieces given for {len(complex)} cones")

        self._polys = []
        for cone, poly in zip(complex, pieces):
            ring = coordinate_ring(cone.dim)
            if poly is None:
                poly = ring.zero
            elif not isinstance(poly, PolyElement):
                poly = ring.ground_new(to_ground(poly))
            elif poly.ring != ring:
                raise IncompatibleFunctionError(
                    f"piece on cone {cone.id} lives in {poly.ring}, expected {ring}")
            self._polys.append(poly)
        self._polys = tuple(self._polys)

        if check:
            self.validate()

    def validate(self) -> None:
        for cone in self._complex:
            poly = self._polys[cone.id]
            for perm in cone.aut.edge_action[1:]:
                if permute(poly, perm) != poly:
                    raise IncompatibleFunctionError(
                        f"piece {poly.as_expr()} on cone {cone.id} is not "
                        f"invariant under {perm}")
            for face in self._complex.facets(cone.id):
                target_dim = self._complex[face.target].dim
                if restrict(poly, face, target_dim) != self._polys[face.target]:
                    raise IncompatibleFunctionError(
                        f"piece on cone {cone.id} does not restrict to the "
                        f"piece on its face {face.target}")

    @property
    def complex(self) -> ConeComplex:
        return self._complex

    @property
    def pieces(self) -> tuple[PolyElement, ...]:
        return self._polys

    def __getitem__(self, cone_id: int) -> PolyElement:
        return self._polys[cone_id]

    def _coerce(self, other) -> 'PiecewisePoly':
        if isinstance(other, PiecewisePoly):
            if other.complex is not self._complex:
                raise IncompatibleFunctionError(
                    "piecewise polynomials live on different complexes")
            return other
        return constant(self._complex, other)

    def _combine(self, other, operation) -> 'PiecewisePoly':
        other = self._coerce(other)
        return PiecewisePoly(self._complex,
                             [operation(a, b) for a, b in zip(self._polys, other.pieces)])

    def __add__(self, other) -> 'PiecewisePoly':
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other) -> 'PiecewisePoly':
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other) -> 'PiecewisePoly':
        return self._combine(other, lambda a, b: b - a)

    def __neg__(self) -> 'PiecewisePoly':
        return PiecewisePoly(self._complex, [-p for p in self._polys], check=False)

    def __mul__(self, other) -> 'PiecewisePoly':
        if isinstance(other, PiecewisePoly):
            return self._combine(other, lambda a, b: a * b)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar) -> 'PiecewisePoly':
        c = to_ground(scalar)
        return PiecewisePoly(self._complex, [p.mul_ground(c) for p in self._polys],
                             check=False)

    def __truediv__(self, scalar) -> 'PiecewisePoly':
        if Rational(scalar) == 0:
            raise ZeroDivisionError("division of a piecewise polynomial by zero")
        return self.scale(1 / Rational(scalar))

    def __pow__(self, exponent: int) -> 'PiecewisePoly':
        if not isinstance(exponent, int) or exponent < 0:
            raise IncompatibleFunctionError(f"cannot raise to the power {exponent}")
        return PiecewisePoly(self._complex, [p ** exponent for p in self._polys])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewisePoly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return other.complex is self._complex and other.pieces == self._polys

    def __hash__(self) -> int:
        return hash((id(self._complex), tuple(tuple(sorted(p.items())) for p in self._polys)))

    def is_zero(self) -> bool:
        return not any(self._polys)

    def degree(self) -> int:
        '''largest total degree of a term, -1 for the zero function'''
        return max((sum(m) for p in self._polys for m in p.keys()), default=-1)

    def homogeneous_component(self, degree: int) -> 'PiecewisePoly':
        return PiecewisePoly(
            self._complex,
            [p.ring.from_dict({m: c for m, c in p.items() if sum(m) == degree})
             for p in self._polys],
            check=False)

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(m) == degree for p in self._polys for m in p.keys())

    def evaluate(self, cone_id: int, coords: Sequence) -> Rational:
        point = self._complex.point(cone_id, coords)
        return sum((QQ.to_sympy(c) * prod(x ** a for x, a in zip(point.coords, m))
                    for m, c in self._polys[point.cone].items()), Rational(0))

    def support(self) -> list[int]:
        return [c.id for c in self._complex if self._polys[c.id]]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return "; ".join(f"{self._complex.cone_name(i)}: {self._polys[i].as_expr()}"
                         for i in self.support())

    def __repr__(self) -> str:
        return f"PiecewisePoly({self})"


def constant(complex: ConeComplex, value) -> PiecewisePoly:
    c = to_ground(value)
    return PiecewisePoly(complex, [coordinate_ring(cone.dim).ground_new(c)
                                   for cone in complex], check=False)


def zero(complex: ConeComplex) -> PiecewisePoly:
    return constant(complex, 0)


def extension(complex: ConeComplex, cone_id: int, poly: PolyElement) -> PiecewisePoly:
    '''
    subset-sum extension of an invariant polynomial on one cone: on every
    cone it is the sum of the transported polynomial over all faces
    isomorphic to `cone_id`
    '''
    size = complex[cone_id].dim
    pieces = []
    for cone in complex:
        ring = coordinate_ring(cone.dim)
        total = ring.zero
        for kept in itertools.combinations(range(cone.dim), size):
            face = complex.face(cone.id, kept)
            if face.target == cone_id:
                total += transport(poly, face, cone.dim)
        pieces.append(total)
    return PiecewisePoly(complex, pieces, check=False)


def _resolve(complex: ConeComplex, cone) -> int:
    return complex.find(cone) if isinstance(cone, str) else int(cone)


def _ray(complex: ConeComplex, ray) -> int:
    ray_id = _resolve(complex, ray)
    if complex[ray_id].dim != 1:
        raise IncompatibleFunctionError(f"cone {ray} is not a ray")
    return ray_id


def phi_ray(complex: ConeComplex, ray) -> PiecewisePoly:
    '''slope one along the ray and linear on every cone'''
    ring = coordinate_ring(1)
    return extension(complex, _ray(complex, ray), ring.gens[0])


def Phi_ray(complex: ConeComplex, ray) -> PiecewisePoly:
    '''sum of the squared coordinates of the edges spanning the ray'''
    ring = coordinate_ring(1)
    return extension(complex, _ray(complex, ray), ring.gens[0] ** 2)


def phi_cone(complex: ConeComplex, cone) -> PiecewisePoly:
    '''the product of all coordinates of the cone, extended by subset sums'''
    cone_id = _resolve(complex, cone)
    ring = coordinate_ring(complex[cone_id].dim)
    product = ring.one
    for x in ring.gens:
        product *= x
    return extension(complex, cone_id, product)


def strict_support_decomposition(f: PiecewisePoly) -> list[tuple[int, PolyElement]]:
    '''
    write `f` as a sum of extensions of polynomials divisible by the product
    of all coordinates of their cone, walking the cones by dimension
    '''
    complex = f.complex
    accumulated = zero(complex)
    parts = []
    for cone in complex:
        residue = f[cone.id] - accumulated[cone.id]
        if not residue:
            continue
        if any(0 in monom for monom in residue.keys()) and cone.dim > 0:
            raise IncompatibleFunctionError(
                f"residue {residue.as_expr()} on cone {cone.id} is not divisible "
                f"by the product of its coordinates")
        parts.append((cone.id, residue))
        added = extension(complex, cone.id, residue)
        accumulated = PiecewisePoly(
            complex, [a + b for a, b in zip(accumulated.pieces, added.pieces)],
            check=False)
    logger.debug(f"strict support decomposition: {[(c, p.as_expr()) for c, p in parts]}")
    return parts
