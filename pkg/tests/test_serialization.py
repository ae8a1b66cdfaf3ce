import json

import pytest

from tropical_pseudostable.complex.complex_utils import same_cone_invariants
from tropical_pseudostable.errors import IncompatibleFunctionError, InvalidGraphError
from tropical_pseudostable.pwpoly.pp_utils import Phi_ray, phi_ray
from tropical_pseudostable.serialization import (
    complex_from_dict, complex_from_json, complex_to_dict, complex_to_dot, complex_to_json, dumps,
    graph_from_dict, graph_from_json,
    graph_to_dict, graph_to_dot, graph_to_json, plmap_from_dict, plmap_to_dict, pp_from_dict,
    pp_from_json, pp_to_dict, pp_to_json, report_to_dict, strata_to_dict)
from tropical_pseudostable.strata.strata_utils import alpha_star
from tropical_pseudostable.strata.verification import ReportEntry


def test_graph_record(loop_and_tail):
    data = graph_to_dict(loop_and_tail)
    assert data == {
        "vertices": [{"genus": 0}, {"genus": 0}],
        "edges": [[0, 0], [0, 1]],
        "legs": [{"label": 1, "vertex": 1}, {"label": 2, "vertex": 1}],
    }
    assert graph_from_json(graph_to_json(loop_and_tail)) == loop_and_tail


def test_graph_records_are_validated():
    with pytest.raises(InvalidGraphError):
        graph_from_dict({"vertices": [{"genus": 1}], "edges": [],
                         "legs": [{"label": 2, "vertex": 0}]})
    with pytest.raises(InvalidGraphError):
        graph_from_dict({"vertices": [{"genus": 1}]})
    with pytest.raises(InvalidGraphError):
        graph_from_dict({"vertices": [{"genus": 0}, {"genus": 1}], "edges": [], "legs": []})


def test_dumps_is_compact():
    assert dumps({"a": [1, 2]}) == '{"a":[1,2]}'


def test_dot(loop_and_tail, stable12):
    dot = graph_to_dot(loop_and_tail, "loop+tail")
    assert dot.startswith('graph "loop+tail" {')
    assert "  v0 -- v0;" in dot
    assert "  v1 -- leg2;" in dot
    assert complex_to_dot(stable12).count("graph ") == 5


def test_complex_record(stable12):
    data = json.loads(dumps(complex_to_dict(stable12)))
    assert (data["genus"], data["n"], data["kind"], data["weights"]) == (1, 2, "stable", None)
    assert [cone["dim"] for cone in data["cones"]] == [0, 1, 1, 2, 2]
    assert len(data["faces"]) == 13
    assert set(data["rays"]) == {"rho0", "rho1"}
    assert len(complex_to_dict(stable12, faces="facets")["faces"]) == 2 + 2 * 2


def test_complex_round_trip(stable12, hassett12):
    for complex in (stable12, hassett12.weighted):
        restored = complex_from_dict(json.loads(dumps(complex_to_dict(complex))))
        assert restored.dims == complex.dims
        assert restored.kind == complex.kind
        assert restored.weights == complex.weights
        assert [c.key for c in restored] == [c.key for c in complex]
        assert same_cone_invariants(restored, complex)


def test_pp_record(stable12):
    f = phi_ray(stable12, "rho0") ** 2 + Phi_ray(stable12, "rho1") / 3
    data = json.loads(dumps(pp_to_dict(f)))
    banana = str(stable12.find("banana"))
    assert sorted(data[banana], key=lambda t: t["exponents"]) == [
        {"coeff": "1", "exponents": [0, 2]},
        {"coeff": "2", "exponents": [1, 1]},
        {"coeff": "1", "exponents": [2, 0]},
    ]
    assert data[str(stable12.find("rho1"))] == [{"coeff": "1/3", "exponents": [2]}]
    assert str(stable12.origin) not in data
    assert pp_from_dict(data, stable12) == f


def test_pp_flat_document(stable12):
    rho0 = str(stable12.find("rho0"))
    data = json.loads('{"%s": [{"coeff": "1", "exponents": [1]}]}' % rho0)
    assert pp_from_dict(data, stable12) == phi_ray(stable12, "rho0")


def test_pp_envelope(stable12, ps12):
    f = phi_ray(stable12, "rho1")
    envelope = {"kind": "stable", "pieces": pp_to_dict(f)}
    assert pp_from_dict(envelope, stable12) == f
    with pytest.raises(IncompatibleFunctionError):
        pp_from_dict(envelope, ps12)


def test_plmap_record(moduli12):
    trop_T = moduli12.trop_T
    data = json.loads(dumps(plmap_to_dict(trop_T)))
    assert set(data) == {str(cone.id) for cone in moduli12.stable}
    assert data[str(moduli12.stable.find("rho1"))]["matrix"] == [[12]]
    restored = plmap_from_dict(data, moduli12.stable, moduli12.pseudostable, name="trop(T)")
    assert restored.name == "trop(T)"
    loop_tail = moduli12.stable.find("loop+tail")
    assert restored.apply(loop_tail, (1, 1)) == trop_T.apply(loop_tail, (1, 1))


def test_strata_record(stable12):
    expr = alpha_star(phi_ray(stable12, "rho0") * phi_ray(stable12, "rho1"))
    data = strata_to_dict(expr)
    assert data["side"] == "stable"
    assert "cusp" not in data
    (term,) = data["terms"]
    assert term["coeff"] == "1/2"
    assert term["decorations"] == []
    assert len(term["graph"]["edges"]) == 2


def test_report_record():
    assert report_to_dict([ReportEntry("a", "b", "pass", "1")]) == [
        {"id": "a", "statement": "b", "status": "pass", "value": "1"}]


def test_json_wrappers(moduli12):
    ps = moduli12.pseudostable
    restored = complex_from_json(complex_to_json(ps))
    assert restored.kind == "pseudostable"
    assert [c.key for c in restored] == [c.key for c in ps]
    f = Phi_ray(restored, "rho0") - phi_ray(restored, "rho0") / 2
    assert pp_from_json(pp_to_json(f), restored) == f
