import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Iterator, Mapping, Sequence

from sympy import QQ, Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex
from tropical_pseudostable.dualgraph.canon_utils import automorphisms, canonical_form
from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.dualgraph.moves import CONTRACTION_SLOPE, has_tail_configuration
from tropical_pseudostable.errors import (
    DegreeError, IncompatibleFunctionError, OutOfRangeError, UnsupportedClassError)
from tropical_pseudostable.plmap.plmap_utils import PLMap, TropicalModuli, tropical_moduli
from tropical_pseudostable.pwpoly.pp_utils import (
    PiecewisePoly, phi_ray, strict_support_decomposition)
from tropical_pseudostable.strata.correlators import correlator

__all__ = [
    "DecoratedStratum",
    "StrataExpr",
    "stratum_class",
    "psi_class",
    "alpha_star",
    "integrate",
    "integrate_ps",
    "pushforward_T",
    "solve_contraction_coefficient",
    "cusp_class",
    "lambda1_check",
]

logger = logging.getLogger(__name__)


def _zero() -> Rational:
    return Rational(0)


@dataclass(frozen=True)
class DecoratedStratum:
    '''
    a boundary stratum with psi-classes on half-edges and legs, stored as
    the canonical representative of its automorphism orbit
    '''
    graph: DualGraph
    half_edge_exponents: tuple[int, ...]
    leg_exponents: tuple[int, ...]

    @classmethod
    def create(cls, graph: DualGraph, half_edge_exponents: Sequence[int] = (),
               leg_exponents: Sequence[int] = ()) -> 'DecoratedStratum':
        half_edge_exponents = tuple(half_edge_exponents) or (0,) * (2 * graph.n_edges)
        leg_exponents = tuple(leg_exponents) or (0,) * graph.n_legs
        if len(half_edge_exponents) != 2 * graph.n_edges or \
                len(leg_exponents) != graph.n_legs or \
                any(a < 0 for a in half_edge_exponents + leg_exponents):
            raise OutOfRangeError(
                f"bad decorations {half_edge_exponents}, {leg_exponents} for {graph}")

        labeling = canonical_form(graph)
        moved = [0] * len(half_edge_exponents)
        for h, a in enumerate(half_edge_exponents):
            moved[labeling.half_edge_map[h]] = a
        orbit = []
        for perm in automorphisms(labeling.graph).half_edge_perms:
            image = [0] * len(moved)
            for h, a in enumerate(moved):
                image[perm[h]] = a
            orbit.append(tuple(image))
        return cls(labeling.graph, min(orbit), tuple(leg_exponents))

    @property
    def degree(self) -> int:
        return self.graph.n_edges + sum(self.half_edge_exponents) + sum(self.leg_exponents)

    @property
    def is_decorated(self) -> bool:
        return any(self.half_edge_exponents) or any(self.leg_exponents)

    def vertex_exponents(self, v: int) -> list[int]:
        return [self.half_edge_exponents[h] for h in self.graph.half_edges_at(v)] + \
            [self.leg_exponents[label - 1] for label in self.graph.legs_at(v)]

    def evaluate(self) -> Rational:
        '''product over the vertices of the psi-correlators'''
        value = Rational(1)
        for v, h in enumerate(self.graph.genera):
            value *= correlator(h, self.vertex_exponents(v))
            if value == 0:
                break
        return value


@dataclass(frozen=True)
class StrataExpr:
    '''
    a rational combination of decorated strata of one complex, plus a
    multiple of the cusp class on the pseudostable side
    '''
    complex: ConeComplex
    terms: Mapping[DecoratedStratum, Rational] = field(default_factory=dict)
    cusp: Rational = Rational(0)
    pushed_forward: bool = False

    def __post_init__(self) -> None:
        if self.complex.kind not in ("stable", "pseudostable"):
            raise UnsupportedClassError(
                f"no strata calculus on the {self.complex.kind} complex")
        merged = defaultdict(_zero)
        for stratum, coeff in self.terms.items():
            merged[stratum] += Rational(coeff)
        object.__setattr__(self, "terms",
                           {s: c for s, c in sorted(merged.items(), key=_term_order) if c != 0})
        object.__setattr__(self, "cusp", Rational(self.cusp))

    @property
    def side(self) -> str:
        return "ps" if self.complex.kind == "pseudostable" else "stable"

    @property
    def genus(self) -> int:
        return self.complex.genus

    @property
    def n_legs(self) -> int:
        return self.complex.n_legs

    def __iter__(self) -> Iterator[tuple[DecoratedStratum, Rational]]:
        return iter(self.terms.items())

    def _check_same(self, other: 'StrataExpr') -> None:
        if other.complex is not self.complex:
            raise IncompatibleFunctionError("strata expressions over different complexes")

    def __add__(self, other: 'StrataExpr') -> 'StrataExpr':
        self._check_same(other)
        terms = defaultdict(_zero, self.terms)
        for stratum, coeff in other:
            terms[stratum] += coeff
        return StrataExpr(self.complex, terms, self.cusp + other.cusp,
                          self.pushed_forward and other.pushed_forward)

    def __neg__(self) -> 'StrataExpr':
        return self * -1

    def __sub__(self, other: 'StrataExpr') -> 'StrataExpr':
        return self + (-other)

    def __mul__(self, scalar) -> 'StrataExpr':
        scalar = Rational(scalar)
        return StrataExpr(self.complex, {s: scalar * c for s, c in self},
                          scalar * self.cusp, self.pushed_forward)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrataExpr):
            return NotImplemented
        return other.complex is self.complex and dict(other.terms) == dict(self.terms) \
            and other.cusp == self.cusp

    def __hash__(self) -> int:
        return hash((id(self.complex), tuple(self.terms.items()), self.cusp))

    def __str__(self) -> str:
        parts = [f"{c}*[{s.graph}; psi={s.half_edge_exponents}"
                 + (f", legs={s.leg_exponents}" if any(s.leg_exponents) else "") + "]"
                 for s, c in self]
        if self.cusp:
            parts.append(f"{self.cusp}*xi")
        return " + ".join(parts) or "0"


def _term_order(item):
    stratum = item[0]
    return (stratum.degree, stratum.graph.n_edges, stratum.graph.genera, stratum.graph.legs,
            stratum.graph.edges, stratum.half_edge_exponents, stratum.leg_exponents)


def stratum_class(complex: ConeComplex, graph: DualGraph,
                  half_edge_exponents: Sequence[int] = (), leg_exponents: Sequence[int] = (),
                  coeff=1) -> StrataExpr:
    '''`coeff` times a single decorated stratum, pushed forward without dividing by |Aut|'''
    return StrataExpr(complex, {DecoratedStratum.create(graph, half_edge_exponents,
                                                        leg_exponents): Rational(coeff)})


def psi_class(complex: ConeComplex, label: int) -> StrataExpr:
    '''the psi-class of the marking `label` on the open stratum'''
    legs = [0] * complex.n_legs
    legs[label - 1] = 1
    return stratum_class(complex, complex[complex.origin].graph, (), legs)


def alpha_star(f: PiecewisePoly) -> StrataExpr:
    '''
    decorated strata of a piecewise polynomial: every strictly supported
    monomial prod x_e^b_e on a cone gives its graph divided by |Aut| with
    each edge decorated by (-psi - psi')^(b_e - 1)
    '''
    terms = defaultdict(_zero)
    for cone_id, poly in strict_support_decomposition(f):
        cone = f.complex[cone_id]
        for monom, coeff in poly.items():
            weight = QQ.to_sympy(coeff) / cone.aut.order
            for split in product(*(range(b) for b in monom)):
                exponents = []
                sign_and_binomial = weight
                for b, k in zip(monom, split):
                    exponents += [k, b - 1 - k]
                    sign_and_binomial *= (-1) ** (b - 1) * comb(b - 1, k)
                terms[DecoratedStratum.create(cone.graph, exponents)] += sign_and_binomial
    return StrataExpr(f.complex, terms)


def top_degree(genus: int, n_legs: int) -> int:
    return 3 * genus - 3 + n_legs


def integrate(expr: StrataExpr, naive: bool = False) -> Rational:
    '''
    degree of a top-degree expression in ambient genus at most one.
    Pseudostable-side expressions must come from `pushforward_T` unless
    `naive` asks for the stable-side formula anyway.
    '''
    if expr.genus > 1:
        raise UnsupportedClassError(f"integration in genus {expr.genus} is not supported")
    if expr.side == "ps" and not expr.pushed_forward and not naive:
        raise UnsupportedClassError(
            "pseudostable-side classes are integrated through the pullback along trop(T), "
            "use integrate_ps or naive=True")
    dim = top_degree(expr.genus, expr.n_legs)
    total = expr.cusp
    for stratum, coeff in expr:
        if stratum.degree != dim:
            raise DegreeError(f"term of degree {stratum.degree} in a top-degree {dim} integral")
        total += coeff * stratum.evaluate()
    return total


def _moduli(genus: int, n_legs: int) -> TropicalModuli:
    return tropical_moduli(genus, n_legs)


def integrate_ps(f: PiecewisePoly, trop_T: PLMap | None = None) -> Rational:
    '''
    integral of the pseudostable-side class of `f`, computed as the
    stable-side integral of the pullback of `f` along trop(T)
    '''
    complex = f.complex
    if complex.genus > 1:
        raise UnsupportedClassError(f"integration in genus {complex.genus} is not supported")
    if not f.is_homogeneous(top_degree(complex.genus, complex.n_legs)):
        raise DegreeError(f"{f} is not homogeneous of top degree")
    trop_T = trop_T or _moduli(complex.genus, complex.n_legs).trop_T
    return integrate(alpha_star(trop_T.pullback(f)))


def pushforward_T(expr: StrataExpr, ps: ConeComplex | None = None) -> StrataExpr:
    '''
    push a stable-side expression to the pseudostable side: strata without
    elliptic tails are carried over, top-degree terms with one become
    multiples of the cusp class, the undecorated elliptic-tail divisor
    vanishes. Other shapes are rejected.
    '''
    if expr.side != "stable":
        raise IncompatibleFunctionError("pushforward_T takes a stable-side expression")
    ps = ps or _moduli(expr.genus, expr.n_legs).pseudostable
    dim = top_degree(expr.genus, expr.n_legs)
    terms = defaultdict(_zero)
    cusp = expr.cusp
    for stratum, coeff in expr:
        if not has_tail_configuration(stratum.graph):
            terms[stratum] += coeff
        elif stratum.degree == dim:
            cusp += coeff * stratum.evaluate()
        elif stratum.graph.n_edges == 1 and not stratum.is_decorated:
            logger.debug(f"elliptic tail divisor {stratum.graph} pushes forward to zero")
        else:
            raise UnsupportedClassError(
                f"pushforward of {stratum.graph} in degree {stratum.degree} is not supported")
    return StrataExpr(ps, terms, cusp, pushed_forward=True)


def _divisor_pairings(genus: int = 1, n_legs: int = 2) -> tuple[Rational, Rational]:
    stable = _moduli(genus, n_legs).stable
    phi0, phi1 = phi_ray(stable, "rho0"), phi_ray(stable, "rho1")
    delta0_delta1 = integrate(alpha_star(phi0 * phi1)) * 2
    delta1_squared = integrate(alpha_star(phi1 ** 2))
    return delta0_delta1, delta1_squared


def solve_contraction_coefficient(delta1_squared=None, delta0_delta1=None) -> Rational:
    '''
    the q with delta0.delta1 + q * delta1^2 = 0 on (1, 2), from the
    intersection engine unless values are injected
    '''
    if delta1_squared is None or delta0_delta1 is None:
        computed = _divisor_pairings()
        delta0_delta1 = computed[0] if delta0_delta1 is None else delta0_delta1
        delta1_squared = computed[1] if delta1_squared is None else delta1_squared
    return -Rational(delta0_delta1) / Rational(delta1_squared)


def cusp_class(n_legs: int, ps: ConeComplex | None = None) -> PiecewisePoly:
    '''the cusp class of the pseudostable side of (1, n) as (phi0)^2 / 6'''
    if n_legs < 2:
        raise OutOfRangeError(f"the cusp class needs n >= 2, got {n_legs}")
    ps = ps or _moduli(1, n_legs).pseudostable
    return phi_ray(ps, "rho0") ** 2 / 6


def lambda1_check(n_legs: int, moduli: TropicalModuli | None = None) -> bool:
    '''
    lambda_1 = phi0 / 12 pulls back to phi0 / 12 + phi1; for n = 2 the
    pairings of both sides against delta0 and delta1 are compared as well
    '''
    if n_legs < 2:
        raise OutOfRangeError(f"the lambda_1 check needs n >= 2, got {n_legs}")
    moduli = moduli or _moduli(1, n_legs)
    stable = moduli.stable
    pulled = moduli.trop_T.pullback(phi_ray(moduli.pseudostable, "rho0") / CONTRACTION_SLOPE)
    phi0, phi1 = phi_ray(stable, "rho0"), phi_ray(stable, "rho1")
    expected = phi0 / CONTRACTION_SLOPE + phi1
    if pulled != expected:
        logger.debug(f"pullback of lambda_1 is {pulled}, expected {expected}")
        return False
    if n_legs == 2:
        for divisor in (phi0 * 2, phi1):
            if integrate(alpha_star(pulled * divisor)) != integrate(alpha_star(expected * divisor)):
                return False
    return True
