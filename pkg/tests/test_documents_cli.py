import io
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdcompact import chart_decompose, chart_decompose_factored, chart_distance
from hdcompact.cli import main
from hdcompact.documents import DocumentError, MatrixDocument, chart_from_dict, chart_to_dict, dumps

from conftest import random_sl, rotation


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin if isinstance(stdin, str) else json.dumps(stdin)))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(m):
    return {"n": len(m), "rows": np.asarray(m).tolist()}


# ---------------------------------------------------------------- documents


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip_is_exact(x):
    assert float(json.loads(dumps(x))) == x


def test_dumps_special_values():
    assert json.loads(dumps({"a": [np.inf, -np.inf]}))["a"] == [np.inf, -np.inf]
    assert np.isnan(json.loads(dumps(np.nan)))
    assert dumps(np.float64(3.0)) == "3.0"
    assert dumps([1, 2]) == "[1, 2]"
    assert json.loads(dumps({"b": np.bool_(True), "n": None, "s": {2, 1}})) == {"b": True, "n": None, "s": [1, 2]}
    with pytest.raises(TypeError):
        dumps(object())


def test_matrix_document_validation():
    m = MatrixDocument.from_dict({"rows": [[2.0, 0.0], [0.0, 0.5]], "sl": True})
    assert m.n == 2 and m.sl
    assert MatrixDocument.from_dict(m.to_dict()).sl
    for bad in ({"rows": [[1, 2, 3]]}, {"rows": [[1, "x"], [0, 1]]}, {"rows": [[np.nan, 0], [0, 1]]},
                {"n": 3, "rows": [[1, 0], [0, 1]]}, {"cols": []}, [1, 2]):
        with pytest.raises(DocumentError):
            MatrixDocument.from_dict(bad)
    with pytest.raises(DocumentError):
        MatrixDocument.from_dict({"rows": [[2.0, 0.0], [0.0, 1.0]]}, require_sl=True)


def test_chart_document_roundtrip():
    rng = np.random.default_rng(0)
    p = chart_decompose_factored(rotation(3, rng), [1e4, 1.0, 1e-4], rotation(3, rng))
    q = chart_from_dict(json.loads(dumps(chart_to_dict(p))))
    assert q.breaks == p.breaks
    assert np.array_equal(q.left_flag.basis, p.left_flag.basis)
    assert np.array_equal(q.tau, p.tau) and q.scale == p.scale
    assert max(chart_distance(p, q).values()) < 1e-15
    broken = chart_to_dict(p)
    broken["scale"] = 2.0 * p.scale
    with pytest.raises(ValueError):
        chart_from_dict(json.loads(dumps(broken)))
    with pytest.raises(DocumentError):
        chart_from_dict({"n": 3})


# ---------------------------------------------------------------- cli


def test_roots(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["roots", "--n", "3", "--json"])
    data = json.loads(out)
    assert code == 0 and data["sigma"] == [2, 2]
    assert data["coroots"][0] == ["2/3", "-1/3", "-1/3"]
    code, out, _ = run(capsys, monkeypatch, ["roots", "--n", "1", "--json"])
    assert code == 0 and json.loads(out)["nodes"] == []
    code, out, err = run(capsys, monkeypatch, ["roots", "--n", "0"])
    assert code == 2 and out == "" and err
    code, out, _ = run(capsys, monkeypatch, ["roots", "--n", "3"])
    assert code == 0 and "sigma: [2, 2]" in out


@pytest.mark.parametrize("mode", ["kak", "iwasawa", "polar"])
def test_decompose_identity(capsys, monkeypatch, mode):
    code, out, _ = run(capsys, monkeypatch, ["decompose", "--mode", mode], doc(np.eye(3)))
    data = json.loads(out)
    assert code == 0 and data["residual"] == 0.0
    if mode == "kak":
        for key in ("k1", "a", "k2"):
            np.testing.assert_allclose(data[key], np.eye(3), atol=1e-15)


def test_decompose_seeded(capsys, monkeypatch):
    g = random_sl(4, np.random.default_rng(3))
    code, out, _ = run(capsys, monkeypatch, ["decompose", "--mode", "iwasawa"], doc(g))
    data = json.loads(out)
    assert code == 0 and data["residual"] <= 1e-10
    np.testing.assert_allclose(np.array(data["k"]) @ np.array(data["a"]) @ np.array(data["n"]), g, atol=1e-10)
    code, out, _ = run(capsys, monkeypatch, ["decompose", "--mode", "horospherical", "--subset", "1,3"], doc(g))
    assert code == 0 and json.loads(out)["S"] == [1, 3]


def test_decompose_errors(capsys, monkeypatch):
    g = doc(np.eye(2))
    code, out, _ = run(capsys, monkeypatch, ["decompose", "--mode", "horospherical"], g)
    assert code == 2 and out == ""
    code, out, _ = run(capsys, monkeypatch, ["decompose", "--mode", "kak"], "{not json")
    assert code == 2 and out == ""
    code, _, _ = run(capsys, monkeypatch, ["decompose", "--mode", "kak"], doc(2 * np.eye(2)))
    assert code == 2
    # an impossible residual budget is a numerical failure
    g = random_sl(3, np.random.default_rng(1))
    code, _, err = run(capsys, monkeypatch, ["decompose", "--mode", "kak", "--tol", "1e-30"], doc(g))
    assert code == 3 and "residual" in err


def test_chart_commands(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["chart", "decompose", "--eps-break", "0.05"], doc(np.diag([10.0, 0.1])))
    chart = json.loads(out)
    assert code == 0 and chart["breaks"] == [1]
    assert chart["tau"] == pytest.approx([0.01], rel=1e-15)
    code, out, _ = run(capsys, monkeypatch, ["chart", "reconstruct"], chart)
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["rows"], np.diag([10.0, 0.1]), rtol=1e-14)
    code, out, _ = run(capsys, monkeypatch, ["chart", "invert"], chart)
    assert code == 0 and json.loads(out)["tau"] == pytest.approx([0.01])
    chart["tau"] = [-1.0]
    code, out, _ = run(capsys, monkeypatch, ["chart", "reconstruct"], chart)
    assert code == 2 and out == ""


def test_chart_reconstruct_roundtrip_through_json(capsys, monkeypatch):
    rng = np.random.default_rng(9)
    g = (rotation(3, rng) * np.array([1e2, 1.0, 1e-2])) @ rotation(3, rng)
    code, out, _ = run(capsys, monkeypatch, ["chart", "decompose", "--eps-break", "0.05"], doc(g))
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["chart", "reconstruct"], out)
    np.testing.assert_allclose(json.loads(out)["rows"], g, atol=1e-12)
    assert json.loads(out)["boundary"] is False


def test_limit_command(capsys, monkeypatch, tmp_path):
    (tmp_path / "k.json").write_text(json.dumps(doc(np.eye(3))))
    (tmp_path / "h.json").write_text(json.dumps({"entries": [1.0, 0.0, -1.0]}))
    argv = ["limit", "--k1", str(tmp_path / "k.json"), "--H", str(tmp_path / "h.json"),
            "--k2", str(tmp_path / "k.json")]
    code, out, _ = run(capsys, monkeypatch, argv)
    data = json.loads(out)
    assert code == 0 and data["left_flag"]["breaks"] == [1, 2]
    argv[4] = str(tmp_path / "missing.json")
    code, out, _ = run(capsys, monkeypatch, argv)
    assert code == 2 and out == ""


def test_faces(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["faces", "--n", "3", "--json"])
    faces = json.loads(out)
    assert code == 0 and len(faces) == 4
    assert sorted(f["dim_face"] for f in faces) == [6, 7, 7, 8]
    code, out, _ = run(capsys, monkeypatch, ["faces", "--n", "3"])
    assert code == 0 and len(out.strip().splitlines()) == 5


def test_verify_haar(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["verify", "haar", "--n", "2", "--json"])
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["details"][0]["slope"] == pytest.approx(-1.0, rel=0.02)


@pytest.mark.parametrize("check", ["inversion", "bnormal", "rank", "minimality", "brackets", "limits"])
def test_verify_checks_pass(capsys, monkeypatch, check):
    code, out, _ = run(capsys, monkeypatch, ["verify", check, "--n", "2", "--samples", "5"])
    assert code == 0 and "PASS" in out


def test_verify_exponents_and_errors(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["verify", "exponents", "--n", "3"])
    assert code == 0 and len(json.loads(out)["rows"]) == 3
    code, _, _ = run(capsys, monkeypatch, ["verify", "haar", "--n", "1"])
    assert code == 2
    code, _, _ = run(capsys, monkeypatch, ["verify", "haar", "--n", "6"])
    assert code == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    import hdcompact.cli as cli
    from hdcompact.verification import AxiomReport

    monkeypatch.setattr(cli, "bracket_report", lambda n: AxiomReport.from_worst("brackets", 1, 0, "max", []))
    code, out, _ = run(capsys, monkeypatch, ["verify", "brackets", "--n", "3"])
    assert code == 4 and "FAIL" in out


def test_verify_is_deterministic(capsys, monkeypatch):
    argv = ["verify", "inversion", "--n", "3", "--samples", "20", "--seed", "7", "--json"]
    _, first, _ = run(capsys, monkeypatch, argv)
    _, second, _ = run(capsys, monkeypatch, argv)
    assert first == second
    _, other, _ = run(capsys, monkeypatch, argv[:-2] + ["8", "--json"])
    assert other != first


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hdcompact", "faces", "--n", "2", "--json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert len(json.loads(res.stdout)) == 2
