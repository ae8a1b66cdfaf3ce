import random

import numpy as np
import pytest
from sympy import Rational

from tropical_pseudostable.complex.enumeration import DEFAULT_EDGE_BOUND, LIGHT_WEIGHT
from tropical_pseudostable.errors import (
    IncompatibleFunctionError, MapConstructionError, OutOfRangeError)
from tropical_pseudostable.plmap.plmap_utils import (
    ConeAssignment, PLMap, hassett_moduli, tropical_moduli)
from tropical_pseudostable.pwpoly.pp_utils import Phi_ray, phi_cone, phi_ray
from tropical_pseudostable.strata.strata_utils import integrate_ps


def test_loop_tail_image(moduli12):
    stable, ps, trop_T = moduli12.stable, moduli12.pseudostable, moduli12.trop_T
    point = trop_T.apply(stable.find("loop+tail"), (1, 1))
    assert point.cone == ps.find("rho0")
    assert point.coords == (13,)


def test_ray_images(moduli12):
    stable, ps, trop_T = moduli12.stable, moduli12.pseudostable, moduli12.trop_T
    assert trop_T.ray_image(stable.find("rho1")) == (ps.find("rho0"), 12)
    assert trop_T.ray_image(stable.find("rho0")) == (ps.find("rho0"), 1)


def test_identity_on_pseudostable_cones(moduli12):
    stable, ps, trop_T = moduli12.stable, moduli12.pseudostable, moduli12.trop_T
    point = trop_T.apply(stable.find("banana"), (3, 2))
    assert point.cone == ps.find("banana")
    assert point.coords == (2, 3)


def test_pullback_of_phi0(moduli12):
    stable, ps, trop_T = moduli12.stable, moduli12.pseudostable, moduli12.trop_T
    assert trop_T.pullback(phi_ray(ps, "rho0")) == \
        phi_ray(stable, "rho0") + 12 * phi_ray(stable, "rho1")
    pulled = trop_T.pullback(Phi_ray(ps, "rho0"))
    assert pulled.evaluate(stable.find("loop+tail"), (1, 1)) == 169
    assert pulled.evaluate(stable.find("rho1"), (1,)) == 144


def test_pullback_needs_the_target(moduli12):
    with pytest.raises(IncompatibleFunctionError):
        moduli12.trop_T.pullback(phi_ray(moduli12.stable, "rho0"))


def test_trop_T_rays_13(moduli13):
    stable, ps, trop_T = moduli13.stable, moduli13.pseudostable, moduli13.trop_T
    for ray in stable.rays:
        target, multiplier = trop_T.ray_image(ray)
        if stable.ray_label(ray) == "rho1":
            assert (target, multiplier) == (ps.find("rho0"), 12)
        else:
            assert (target, multiplier) == (ps.cone_of(stable[ray].graph), 1)


def test_pullback_commutes_with_evaluation(moduli13):
    stable, ps, trop_T = moduli13.stable, moduli13.pseudostable, moduli13.trop_T
    rng = random.Random(5)
    functions = [phi_ray(ps, ray) for ray in ps.rays] + [Phi_ray(ps, "rho0")] + \
        [phi_cone(ps, cone.id) for cone in ps if cone.dim == 2]
    for _ in range(200):
        f = rng.choice(functions) * rng.choice(functions) + rng.randint(-2, 2) * rng.choice(functions)
        cone = rng.choice(stable.cones)
        coords = [rng.randint(0, 9) for _ in range(cone.dim)]
        image = trop_T.apply(cone.id, coords)
        assert trop_T.pullback(f).evaluate(cone.id, coords) == f.evaluate(image.cone, image.coords)


def _broken(moduli, cone_name, matrix):
    assignments = list(moduli.trop_T.assignments)
    cone_id = moduli.stable.find(cone_name)
    assignments[cone_id] = ConeAssignment(assignments[cone_id].target, np.array(matrix))
    return PLMap(moduli.stable, moduli.pseudostable, assignments)


def test_rejects_negative_matrices(moduli12):
    with pytest.raises(MapConstructionError):
        _broken(moduli12, "rho0", [[-1]])


def test_rejects_bad_shapes(moduli12):
    with pytest.raises(MapConstructionError):
        _broken(moduli12, "rho0", [[1], [1]])


def test_rejects_face_incompatibility(moduli12):
    with pytest.raises(MapConstructionError):
        _broken(moduli12, "rho0", [[2]])


def test_rejects_missing_cones(moduli12):
    with pytest.raises(MapConstructionError):
        PLMap(moduli12.stable, moduli12.pseudostable, moduli12.trop_T.assignments[:-1])


def test_hassett_contracts_rho1(moduli12, hassett12):
    stable, trop_pi = hassett12.stable, hassett12.trop_pi
    assert stable is moduli12.stable
    assert trop_pi.ray_image(stable.find("rho1")) == (hassett12.weighted.origin, 0)
    assert trop_pi.ray_image(stable.find("rho0")) == (hassett12.weighted.find("rho0"), 1)
    point = trop_pi.apply(stable.find("loop+tail"), (2, 2))
    assert point.cone == hassett12.weighted.find("rho0")
    assert point.coords == (Rational(2),)


def test_hassett_pullback(moduli12, hassett12):
    stable = moduli12.stable
    by_pi = hassett12.trop_pi.pullback(phi_ray(hassett12.weighted, "rho0"))
    by_T = moduli12.trop_T.pullback(phi_ray(moduli12.pseudostable, "rho0"))
    assert by_pi == phi_ray(stable, "rho0")
    assert by_pi != by_T


def test_moduli_are_shared(moduli12, hassett12):
    assert tropical_moduli(1, 2) is tropical_moduli(1, 2, DEFAULT_EDGE_BOUND)
    assert tropical_moduli(1, 2, 3) is moduli12
    assert hassett_moduli(1, 2) is hassett_moduli(1, 2, "1/100", DEFAULT_EDGE_BOUND)
    assert hassett_moduli(1, 2, LIGHT_WEIGHT) is hassett12
    assert hassett12.stable is tropical_moduli(1, 2, DEFAULT_EDGE_BOUND).stable
    with pytest.raises(OutOfRangeError):
        tropical_moduli(1, 4, 3)


def test_integrate_ps_with_an_explicit_edge_bound():
    ps = tropical_moduli(1, 2, DEFAULT_EDGE_BOUND).pseudostable
    assert 4 * integrate_ps(phi_ray(ps, "rho0") ** 2) == 24
    assert integrate_ps(Phi_ray(ps, "rho0")) == 5


def test_pullback_of_Phi0(moduli12):
    stable, ps, trop_T = moduli12.stable, moduli12.pseudostable, moduli12.trop_T
    assert trop_T.pullback(Phi_ray(ps, "rho0")) == \
        Phi_ray(stable, "rho0") + 144 * Phi_ray(stable, "rho1") + 24 * phi_cone(stable, "loop+tail")


def test_pullback_is_a_ring_map(moduli13):
    ps, trop_T = moduli13.pseudostable, moduli13.trop_T
    functions = [phi_ray(ps, ray) for ray in ps.rays] + [Phi_ray(ps, "rho0")]
    for f in functions:
        for g in functions:
            assert trop_T.pullback(f * g) == trop_T.pullback(f) * trop_T.pullback(g)
            assert trop_T.pullback(f + g) == trop_T.pullback(f) + trop_T.pullback(g)
