import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from sympy import Rational

from tropical_pseudostable.complex.complex_utils import same_cone_invariants
from tropical_pseudostable.complex.enumeration import DEFAULT_EDGE_BOUND, LIGHT_WEIGHT
from tropical_pseudostable.dualgraph.moves import CONTRACTION_SLOPE, pseudostabilize
from tropical_pseudostable.errors import TropicalModuliError
from tropical_pseudostable.plmap.plmap_utils import hassett_moduli, tropical_moduli
from tropical_pseudostable.pwpoly.pp_utils import Phi_ray, phi_ray
from tropical_pseudostable.strata.strata_utils import (
    alpha_star, cusp_class, integrate, integrate_ps, lambda1_check, pushforward_T,
    solve_contraction_coefficient, stratum_class)

__all__ = [
    "ReportEntry",
    "Verifier",
    "verify",
    "all_passed",
]

PASS, FAIL, SKIPPED, INFORMATIONAL = "pass", "fail", "skipped", "informational"


@dataclass(frozen=True)
class ReportEntry:
    id: str
    statement: str
    status: str
    value: str


class Verifier:
    '''runs every identity that applies to (g, n) and collects a report'''

    def __init__(self, genus: int, n_legs: int, edge_bound: int = DEFAULT_EDGE_BOUND) -> None:
        self._logger = logging.getLogger(self.__class__.__name__)
        self._genus = genus
        self._n_legs = n_legs
        self._moduli = tropical_moduli(genus, n_legs, edge_bound)
        self._edge_bound = edge_bound
        self._report: list[ReportEntry] = []

    @property
    def report(self) -> list[ReportEntry]:
        return list(self._report)

    def _check(self, id: str, statement: str, check: Callable[[], tuple[bool, str]],
               informational: bool = False) -> None:
        try:
            ok, value = check()
            status = INFORMATIONAL if informational else (PASS if ok else FAIL)
        except TropicalModuliError as e:
            status, value = FAIL, f"error: {e}"
        else:
            if informational and not ok:
                self._logger.warning(f"{id}: {statement} ({value})")
        self._logger.debug(f"{id}: {status} ({value})")
        self._report.append(ReportEntry(id, statement, status, value))

    def _skip(self, id: str, statement: str, reason: str) -> None:
        self._report.append(ReportEntry(id, statement, SKIPPED, f"skipped: {reason}"))

    def run(self) -> list[ReportEntry]:
        self._report = []
        self._combinatorial()

        genus_one = [
            ("lambda1", "trop(T)^*(phi0/12) = phi0/12 + phi1", self._lambda1),
            ("hassett-pullback", "trop(pi)^*(phi0) = phi0 differs from trop(T)^*(phi0) on rho1",
             self._hassett_pullback),
        ]
        base_case = [
            ("hassett-complex", "light-weight complex has the cone structure of the "
             "pseudostable complex", self._hassett_complex, False),
            ("delta0-delta1", "int delta0.delta1 = 1", self._delta0_delta1, False),
            ("delta1-squared", "int delta1^2 = -1/24", self._delta1_squared, False),
            ("contraction-coefficient", "delta0.delta1 + q delta1^2 = 0 gives q = 24",
             self._contraction_coefficient, False),
            ("slope", "q / 2 is the slope 12 of trop(T) on rho1", self._slope, False),
            ("selfint", "4 alpha*(phi0^2) = 2 delta0(-psi - psi') + 4 delta_banana, "
             "integral 0", self._selfint, False),
            ("kernel", "phi0^2 is a nonzero function with vanishing integral",
             self._kernel, False),
            ("ps-self-intersection", "int (delta0^ps)^2 = 24", self._ps_self_intersection, False),
            ("cusp-prop", "((delta0^ps)^2 - T_*(delta0^2)) / 24 = T_*(delta0.delta1) = 1",
             self._cusp_prop, False),
            ("cusp-phisquare", "int (phi0^ps)^2 / 6 = 1", self._cusp_phisquare, False),
            ("cusp-phi-form", "(alpha*(Phi0^ps) - T_*(alpha*(Phi0))) / c = xi forces c = 6",
             self._cusp_phi_form, False),
            ("cusp-phi-form-printed", "the same quotient with the constant 12 "
             "is inconsistent", self._cusp_phi_form_printed, True),
            ("naive-ps-integral", "stable-side formula on alpha*(Phi0^ps) gives -1, not 5",
             self._naive_ps_integral, True),
        ]

        for id, statement, check in genus_one:
            if self._genus > 1:
                self._skip(id, statement, "genus>1")
            else:
                self._check(id, statement, check)
        for id, statement, check, informational in base_case:
            if self._genus > 1:
                self._skip(id, statement, "genus>1")
            elif self._n_legs != 2:
                self._skip(id, statement, "n != 2")
            else:
                self._check(id, statement, check, informational)

        failed = [entry.id for entry in self._report if entry.status == FAIL]
        self._logger.info(f"verified ({self._genus}, {self._n_legs}): "
                          f"{len(self._report)} lines, {len(failed)} failed {failed or ''}")
        return self.report

    def _combinatorial(self) -> None:
        self._check("ps-subcomplex",
                    "the complement of the open star of rho1 is the pseudostable locus",
                    self._ps_subcomplex)
        self._check("pseudostabilize",
                    "pseudostabilization is pseudostable, idempotent and keeps (g, n)",
                    self._pseudostabilize)
        self._check("trop-T-rays", "trop(T) sends rho1 to 12 rho0 and fixes every other ray",
                    self._trop_T_rays)
        self._check("trop-T-identity", "trop(T) is the identity off the open star of rho1",
                    self._trop_T_identity)
        self._check("pullback-rays",
                    "trop(T)^*(phi_rho) = phi_rho for rho != rho0, "
                    "trop(T)^*(phi0) = phi0 + 12 phi1", self._pullback_rays)

    def _ps_subcomplex(self) -> tuple[bool, str]:
        stable, ps = self._moduli.stable, self._moduli.pseudostable
        predicate = {cone.key for cone in stable if cone.graph.is_pseudostable()}
        return {cone.key for cone in ps} == predicate, f"dims {ps.dims}, total {len(ps)}"

    def _pseudostabilize(self) -> tuple[bool, str]:
        ok = True
        for cone in self._moduli.stable:
            result = pseudostabilize(cone.graph)
            again = pseudostabilize(result.graph)
            ok &= result.graph.is_pseudostable() and again.is_identity \
                and result.graph.genus() == cone.graph.genus() \
                and result.graph.n_legs == cone.graph.n_legs
        return ok, f"{len(self._moduli.stable)} graphs"

    def _trop_T_rays(self) -> tuple[bool, str]:
        stable, ps, trop_T = self._moduli.stable, self._moduli.pseudostable, self._moduli.trop_T
        ok, images = True, []
        for ray in stable.rays:
            target, multiplier = trop_T.ray_image(ray)
            label = stable.ray_label(ray)
            wanted = (ps.find("rho0"), CONTRACTION_SLOPE) if label == "rho1" \
                else (ps.cone_of(stable[ray].graph), 1)
            ok &= (target, multiplier) == wanted
            if label == "rho1":
                images.append(f"rho1 -> {multiplier} {ps.cone_name(target)}")
        return ok, ", ".join(images) or "no elliptic tail ray"

    def _trop_T_identity(self) -> tuple[bool, str]:
        stable, ps, trop_T = self._moduli.stable, self._moduli.pseudostable, self._moduli.trop_T
        ok = True
        for cone in stable:
            if cone.graph.is_pseudostable():
                assignment = trop_T[cone.id]
                ok &= assignment.target == ps.cone_of(cone.graph) and \
                    np.array_equal(assignment.matrix, np.eye(cone.dim, dtype=np.int64))
        return ok, f"{len(ps)} cones"

    def _pullback_rays(self) -> tuple[bool, str]:
        stable, ps, trop_T = self._moduli.stable, self._moduli.pseudostable, self._moduli.trop_T
        ok = True
        for ray in ps.rays:
            label = ps.ray_label(ray)
            pulled = trop_T.pullback(phi_ray(ps, ray))
            if label == "rho0":
                expected = phi_ray(stable, "rho0")
                if "rho1" in stable.rays_by_label():
                    expected = expected + CONTRACTION_SLOPE * phi_ray(stable, "rho1")
            else:
                expected = phi_ray(stable, stable.cone_of(ps[ray].graph))
            ok &= pulled == expected
        return ok, f"{len(ps.rays)} rays"

    def _lambda1(self) -> tuple[bool, str]:
        ok = lambda1_check(self._n_legs, self._moduli)
        return ok, "phi0/12 + phi1" if ok else "mismatch"

    def _hassett(self):
        return hassett_moduli(self._genus, self._n_legs, LIGHT_WEIGHT, self._edge_bound)

    def _hassett_pullback(self) -> tuple[bool, str]:
        hassett = self._hassett()
        stable = self._moduli.stable
        phi0 = phi_ray(stable, "rho0")
        by_pi = hassett.trop_pi.pullback(phi_ray(hassett.weighted, "rho0"))
        by_T = self._moduli.trop_T.pullback(phi_ray(self._moduli.pseudostable, "rho0"))
        rho1 = stable.find("rho1")
        pi_multiplier = hassett.trop_pi.ray_image(rho1)[1]
        T_multiplier = self._moduli.trop_T.ray_image(rho1)[1]
        ok = by_pi == phi0 and by_pi != by_T and (pi_multiplier, T_multiplier) == (0, 12)
        return ok, f"rho1 multipliers {pi_multiplier} vs {T_multiplier}"

    def _hassett_complex(self) -> tuple[bool, str]:
        weighted = self._hassett().weighted
        ok = same_cone_invariants(weighted, self._moduli.pseudostable)
        return ok, f"dims {weighted.dims}"

    def _phi(self):
        stable = self._moduli.stable
        return phi_ray(stable, "rho0"), phi_ray(stable, "rho1")

    def _delta0_delta1(self) -> tuple[bool, str]:
        phi0, phi1 = self._phi()
        value = 2 * integrate(alpha_star(phi0 * phi1))
        return value == 1, str(value)

    def _delta1_squared(self) -> tuple[bool, str]:
        _, phi1 = self._phi()
        value = integrate(alpha_star(phi1 ** 2))
        return value == Rational(-1, 24), str(value)

    def _contraction_coefficient(self) -> tuple[bool, str]:
        q = solve_contraction_coefficient()
        return q == 24, f"q={q}"

    def _slope(self) -> tuple[bool, str]:
        slope = solve_contraction_coefficient() / 2
        return slope == CONTRACTION_SLOPE, f"slope {slope}"

    def _selfint(self) -> tuple[bool, str]:
        stable = self._moduli.stable
        phi0, _ = self._phi()
        lhs = 4 * alpha_star(phi0 ** 2)
        rho0 = stable[stable.find("rho0")].graph
        rhs = stratum_class(stable, rho0, (1, 0), coeff=-2) \
            + stratum_class(stable, rho0, (0, 1), coeff=-2) \
            + stratum_class(stable, stable[stable.find("banana")].graph, coeff=4)
        value = integrate(lhs)
        return lhs == rhs and value == 0, f"integral {value}"

    def _kernel(self) -> tuple[bool, str]:
        phi0, _ = self._phi()
        value = integrate(alpha_star(phi0 ** 2))
        return not (phi0 ** 2).is_zero() and value == 0, f"integral {value}"

    def _ps_self_intersection(self) -> tuple[bool, str]:
        value = 4 * integrate_ps(phi_ray(self._moduli.pseudostable, "rho0") ** 2,
                                 self._moduli.trop_T)
        return value == 24, str(value)

    def _xi(self) -> Rational:
        phi0, phi1 = self._phi()
        return integrate(pushforward_T(2 * alpha_star(phi0 * phi1), self._moduli.pseudostable))

    def _cusp_prop(self) -> tuple[bool, str]:
        phi0, _ = self._phi()
        ps_square = 4 * integrate_ps(phi_ray(self._moduli.pseudostable, "rho0") ** 2,
                                     self._moduli.trop_T)
        pushed = integrate(pushforward_T(4 * alpha_star(phi0 ** 2), self._moduli.pseudostable))
        value = (ps_square - pushed) / 24
        return value == 1 == self._xi(), f"({ps_square} - {pushed})/24 = {value}"

    def _cusp_phisquare(self) -> tuple[bool, str]:
        value = integrate_ps(cusp_class(self._n_legs, self._moduli.pseudostable),
                             self._moduli.trop_T)
        return value == 1, str(value)

    def _phi_form_difference(self) -> Rational:
        stable, ps = self._moduli.stable, self._moduli.pseudostable
        ps_value = integrate_ps(Phi_ray(ps, "rho0"), self._moduli.trop_T)
        pushed = integrate(pushforward_T(alpha_star(Phi_ray(stable, "rho0")), ps))
        return ps_value - pushed

    def _cusp_phi_form(self) -> tuple[bool, str]:
        constant = self._phi_form_difference() / self._xi()
        return constant == 6, f"constant {constant}"

    def _cusp_phi_form_printed(self) -> tuple[bool, str]:
        value = self._phi_form_difference() / 12
        return value == self._xi(), f"quotient by 12 = {value}, int xi = {self._xi()}"

    def _naive_ps_integral(self) -> tuple[bool, str]:
        ps = self._moduli.pseudostable
        naive = integrate(alpha_star(Phi_ray(ps, "rho0")), naive=True)
        pulled = integrate_ps(Phi_ray(ps, "rho0"), self._moduli.trop_T)
        return naive == pulled, f"naive {naive}, through trop(T) {pulled}"


def verify(genus: int, n_legs: int, edge_bound: int = DEFAULT_EDGE_BOUND) -> list[ReportEntry]:
    return Verifier(genus, n_legs, edge_bound).run()


def all_passed(report: list[ReportEntry]) -> bool:
    return all(entry.status != FAIL for entry in report)
