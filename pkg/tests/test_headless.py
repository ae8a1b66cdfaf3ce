import json

import pytest

from tropical_pseudostable.headless import main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_enumerate(capsys):
    code, out = _run(capsys, "enumerate", "-g", "1", "-n", "2")
    assert code == 0
    assert out.splitlines()[0] == "dims: [1,2,2], total 5"
    assert len(out.splitlines()) == 6


def test_enumerate_pseudostable(capsys):
    code, out = _run(capsys, "enumerate", "-g", "1", "-n", "2", "--pseudostable")
    assert code == 0
    assert out.splitlines()[0] == "dims: [1,1,1], total 3"


def test_enumerate_weighted(capsys):
    code, out = _run(capsys, "enumerate", "-g", "1", "-n", "3", "--weighted", "1/100")
    assert code == 0
    assert out.splitlines()[0] == "dims: [1,1,3,1], total 6"


def test_enumerate_json(capsys):
    code, out = _run(capsys, "enumerate", "-g", "1", "-n", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["rays"].keys() == {"rho0", "rho1"}


@pytest.mark.parametrize("argv", [
    ("enumerate", "-g", "1", "-n", "1"),
    ("enumerate", "-g", "2", "-n", "3", "--edge-bound", "5"),
    ("enumerate", "-g", "1"),
    ("enumerate", "-g", "1", "-n", "2", "--pseudostable", "--weighted", "1/100"),
    ("frobnicate",),
    ("pp", "eval", "-g", "1", "-n", "2", "--expr", "phi0 +"),
    ("pp", "eval", "-g", "1", "-n", "2", "--expr", "phi1", "--pseudostable"),
    ("map", "trop-t", "-g", "1", "-n", "2", "--point", "cone=nope;coords=1"),
])
def test_usage_errors(capsys, argv):
    assert main(list(argv)) == 2


def test_map_point(capsys):
    code, out = _run(capsys, "map", "trop-t", "-g", "1", "-n", "2",
                     "--point", "cone=loop+tail;coords=1,1")
    assert code == 0
    assert out.strip() == "ray rho0_ps, coord 13"


def test_map_to_faces(capsys):
    _, out = _run(capsys, "map", "trop-pi", "-g", "1", "-n", "2", "--point", "cone=rho1;coords=3")
    assert out.strip() == "origin"
    _, out = _run(capsys, "map", "trop-pi", "-g", "1", "-n", "2",
                  "--point", "cone=loop+tail;coords=2,2")
    assert out.strip() == "ray rho0_w, coord 2"
    _, out = _run(capsys, "map", "trop-t", "-g", "1", "-n", "2",
                  "--point", "cone=banana;coords=3,2")
    assert out.strip() == "cone banana_ps, coords 2,3"


def test_map_pullback(capsys):
    code, out = _run(capsys, "map", "trop-t", "-g", "1", "-n", "2", "--pullback", "phi0")
    assert code == 0
    assert "rho1: 12*x0" in out


def test_pp_eval(capsys):
    code, out = _run(capsys, "pp", "eval", "-g", "1", "-n", "2",
                     "--expr", "phi0^2 - Phi0 - 2*phi(banana)", "--pseudostable")
    assert code == 0
    assert out.strip() == "0"
    _, out = _run(capsys, "pp", "eval", "-g", "1", "-n", "2", "--expr", "phi0 + phi1",
                  "--point", "cone=loop+tail;coords=2,3")
    assert out.strip() == "5"


def test_pp_decompose(capsys):
    code, out = _run(capsys, "pp", "decompose", "-g", "1", "-n", "2", "--expr", "phi0^2")
    assert code == 0
    assert out.splitlines() == ["rho0: x0**2", "banana: 2*x0*x1"]


def test_integrate(capsys):
    code, out = _run(capsys, "integrate", "-g", "1", "-n", "2", "--expr", "phi0*phi1",
                     "--times", "2")
    assert code == 0
    assert out.strip() == "1"


def test_integrate_pseudostable(capsys):
    _, out = _run(capsys, "integrate", "-g", "1", "-n", "2", "--expr", "Phi0", "--pseudostable")
    assert out.strip() == "5"
    _, out = _run(capsys, "integrate", "-g", "1", "-n", "2", "--expr", "Phi0", "--pseudostable",
                  "--naive")
    assert out.strip() == "-1"


def test_integrate_wrong_degree(capsys):
    assert main(["integrate", "-g", "1", "-n", "2", "--expr", "phi0"]) == 2


def test_verify(capsys):
    code, out = _run(capsys, "verify", "-g", "1", "-n", "2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert {entry["status"] for entry in report} == {"pass", "informational"}
    assert all(entry.keys() == {"id", "statement", "status", "value"} for entry in report)


def test_verify_text(capsys):
    code, out = _run(capsys, "verify", "-g", "1", "-n", "3")
    assert code == 0
    assert any(line.startswith("skipped") and "selfint" in line for line in out.splitlines())


def test_export_import(capsys, tmp_path):
    path = tmp_path / "complex.json"
    assert main(["-v", "export", "-g", "1", "-n", "2", "--pseudostable", "-o", str(path)]) == 0
    assert json.loads(path.read_text())["kind"] == "pseudostable"
    code, out = _run(capsys, "import", "-i", str(path))
    assert code == 0
    assert out.splitlines()[0] == "dims: [1,1,1], total 3"


def test_export_dot(capsys):
    code, out = _run(capsys, "export", "-g", "1", "-n", "2", "--cone", "banana", "--format", "dot")
    assert code == 0
    assert out.startswith('graph "banana" {')


def test_import_missing_file(capsys, tmp_path):
    assert main(["import", "-i", str(tmp_path / "missing.json")]) == 2


def test_output_is_deterministic(capsys):
    _, first = _run(capsys, "enumerate", "-g", "1", "-n", "3", "--format", "json")
    _, second = _run(capsys, "enumerate", "-g", "1", "-n", "3", "--format", "json")
    assert first == second


def test_integrate_weighted_is_rejected(caplog):
    code = main(["integrate", "-g", "1", "-n", "2", "--expr", "phi0^2", "--weighted", "1/100"])
    assert code == 2
    assert any("no strata calculus on the weighted complex" in record.getMessage()
               for record in caplog.records)
