import json

import pytest

from segre_kit import cli
from segre_kit import pq_linear as pl
from segre_kit import type_decomp as td


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    w = pl.standard_symplectic(2)
    g = td.from_gram(2, pl.compatible_metric(w, w).gram)
    phi = td.from_function(2, lambda X, Y: X[0, 0] * Y + 2 * Y[1, 0] * X)
    paths = {
        "g": g.to_json(),
        "phi": phi.to_json(),
        "bad": {"n": 2, "arity": "vector", "values": [1, 2, 3]},
        "flat": {"family": "flat", "n": 2, "params": [1.0]},
        "shear": {"family": "tangent-shear", "n": 2, "params": [1.0, 0.5],
                  "grid": {"min": -1, "max": 1, "steps": 5}, "h": 1e-3},
        "unknown": {"family": "nope", "n": 2},
    }
    out = {}
    for name, obj in paths.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2, "values": [1, 2')
    out["broken"] = str(broken)
    return out


def test_verify_algebra(capsys):
    code, rep = run_json(capsys, "verify", "algebra")
    assert code == 0 and rep["pass"]
    assert all(c["pass"] and c["anchor"] for c in rep["checks"])
    assert "elapsed" not in rep


def test_verify_parabolic_includes_identity_and_harmonic_checks(capsys):
    code, rep = run_json(capsys, "verify", "parabolic", "--n", "2")
    names = [c["name"] for c in rep["checks"]]
    assert code == 0
    assert any(name.startswith("S = 0") for name in names)
    assert any(name.startswith("harmonic curvature") for name in names)


def test_verify_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "decomp", "--n", "2", "--json")
    _, b, _ = run(capsys, "verify", "decomp", "--n", "2", "--json")
    assert a == b


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "everything")[0] == 2
    assert run(capsys, "verify", "algebra", "--n", "6")[0] == 2
    assert run(capsys, "verify", "algebra", "--n", "1")[0] == 2


def test_timing_flag(capsys):
    code, rep = run_json(capsys, "verify", "algebra", "--timing")
    assert code == 0 and rep["elapsed"] >= 0


def test_decompose_metric(capsys, files):
    code, rep = run_json(capsys, "decompose", "--input", files["g"], "--structure", "j-")
    assert code == 0
    g = td.BilinearMap.from_json(json.load(open(files["g"])))
    assert td.BilinearMap.from_json(rep["components"]["(1,1)"]) == g
    assert td.BilinearMap.from_json(rep["components"]["(2,0)+(0,2)"]).is_zero()


def test_decompose_nilpotent_only_02(capsys, files):
    code, rep = run_json(capsys, "decompose", "--input", files["phi"], "--structure", "j0")
    assert code == 0 and list(rep["components"]) == ["(0,2)"]
    phi = td.BilinearMap.from_json(json.load(open(files["phi"])))
    assert td.BilinearMap.from_json(rep["components"]["(0,2)"]) == td.part02_nilpotent(phi, pl.standard(0))


def test_decompose_custom_and_exact_strings(capsys, files):
    code, rep = run_json(capsys, "decompose", "--input", files["phi"], "--structure", "custom", "--m", '[[1, "1/2"], [2, -1]]')
    assert code == 0
    assert set(rep["components"]) == {"(2,0)", "(1,1)", "(0,2)"}
    values = [v for comp in rep["components"].values() for v in comp["values"]]
    assert all(isinstance(v, (int, str)) for v in values)
    assert any(isinstance(v, str) and "/" in v for v in values)


def test_decompose_errors(capsys, files):
    code, _, err = run(capsys, "decompose", "--input", files["bad"])
    assert code == 2 and "64 values" in err
    code, _, err = run(capsys, "decompose", "--input", files["broken"])
    assert code == 2 and "invalid JSON" in err
    assert run(capsys, "decompose", "--input", files["phi"], "--structure", "custom", "--m", "[[1, 0], [0, 1]]")[0] == 2
    assert run(capsys, "decompose", "--input", files["phi"], "--structure", "custom")[0] == 2
    assert run(capsys, "decompose", "--input", files["g"], "--structure", "j0")[0] == 2


def test_kostant_reports(capsys):
    code, rep = run_json(capsys, "kostant", "--n", "2")
    assert code == 0
    assert rep["dimensions"]["hom-1"] == 0
    assert rep["k_split"] == {"K1": 5, "K2": 5}
    code, rep = run_json(capsys, "kostant", "--n", "3", "--hom", "1")
    assert code == 0 and rep["dimensions"]["hom-1"] > 0
    assert rep["trace_free"] is True and rep["symmetry_type"] is True
    assert run(capsys, "kostant", "--n", "6")[0] == 2
    assert run(capsys, "kostant", "--n", "2", "--hom", "4")[0] == 2


def test_nijenhuis_reports(capsys, files):
    code, rep = run_json(capsys, "nijenhuis", "--config", files["flat"], "--grid=-1,1,3")
    assert code == 0 and rep["summary"]["nijenhuis_max"] < 1e-10 and rep["dimensions"]["points"] == 81
    code, rep = run_json(capsys, "nijenhuis", "--config", files["shear"])
    verdicts = rep["summary"]["verdicts"]
    assert code == 0 and verdicts["frobenius_vanishes"] and verdicts["nijenhuis_nonzero"]
    code, rep = run_json(capsys, "nijenhuis", "--config", files["shear"], "--h", "0.002")
    assert rep["inputs"]["h"] == 0.002
    assert run(capsys, "nijenhuis", "--config", files["unknown"])[0] == 2
    assert run(capsys, "nijenhuis", "--config", files["broken"])[0] == 2
    assert run(capsys, "nijenhuis", "--config", files["flat"], "--grid", "x")[0] == 2


def test_failing_check_exits_one(capsys, monkeypatch):
    from segre_kit import suites

    monkeypatch.setattr(suites, "checks_for", lambda scope, ns: [lambda: suites.Check("broken", "anchor", False)])
    code, out, _ = run(capsys, "verify", "algebra")
    assert code == 1 and "FAIL" in out


def test_text_output(capsys):
    code, out, _ = run(capsys, "verify", "algebra")
    assert code == 0 and out.startswith("verify: PASS")
