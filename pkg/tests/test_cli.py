import io
import json
import subprocess
import sys

import numpy as np
import pytest

from secondorder.cli import main, parse_text
from secondorder.sysmodel import load_system
from secondorder.trajectory import read_csv

from conftest import SYSTEMS_DIR


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def path(name):
    return SYSTEMS_DIR / name


def test_analyze_damped3_continuous():
    code, report, _ = run_json("analyze", path("damped3_continuous.json"))
    assert code == 0
    ctrl = report["results"]["controllability"]
    assert ctrl["verdict"] is True
    assert (ctrl["rank"], ctrl["required_rank"]) == (3, 3)
    assert ctrl["matrix"] == [[1, 2, 24], [0, 6, 21], [2, 1, -11]]
    assert report["tolerances"]["rank_tol"] == 1e-10


def test_analyze_assert():
    assert run("analyze", path("damped2_discrete.json"), "--assert")[0] == 0
    assert run("analyze", path("unobservable.json"), "--assert")[0] == 1
    assert run("analyze", path("unobservable.json"))[0] == 0
    # generic n-block controllability matrix is [B, 0] here
    assert run("analyze", path("undamped2_continuous.json"), "--assert")[0] == 1
    assert run("analyze", path("undamped2_continuous.json"), "--assert", "observable")[0] == 0


def test_malformed_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, out, err = run("analyze", bad)
    assert code == 2 and "malformed" in err
    doc = json.loads(path("undamped2_continuous.json").read_text())
    doc["b"] = [[1]]
    bad.write_text(json.dumps(doc))
    code, _, err = run("analyze", bad)
    assert code == 2 and "b:" in err
    assert run("analyze", tmp_path / "missing.json")[0] == 2
    assert run("analyze")[0] == 2
    assert run("frobnicate", path("undamped2_continuous.json"))[0] == 2


def test_text_and_json_reports_agree():
    for argv in (
        ("analyze", path("damped2_discrete.json")),
        ("tf", path("undamped2_continuous.json")),
        ("tf", path("damped3_continuous.json")),
        ("steer", path("damped3_discrete.json"), "--x0", "0,0,0", "--x1", "1,0,0", "--target", "1,1,1"),
    ):
        _, text, _ = run(*argv)
        _, doc, _ = run_json(*argv)
        assert parse_text(text) == doc


def test_determinism():
    argv = ("analyze", path("damped3_continuous.json"))
    assert run(*argv) == run(*argv)


def test_tf_reports():
    code, report, _ = run_json("tf", path("undamped2_continuous.json"))
    res = report["results"]
    assert code == 0
    assert res["H"] == "H(s) = (7s^2 - 5)/(s^4 - 6s^2 + 5)"
    assert res["method"] == "second_order"
    assert res["cancellations"] == []
    _, report, _ = run_json("tf", path("double_integrator.json"))
    assert report["results"]["H"] == "H(s) = 1/s^2"
    _, report, _ = run_json("tf", path("damped3_continuous.json"))
    assert report["results"]["method"] == "lift"
    assert report["results"]["shape"] == [3, 1]
    code, _, err = run("tf", path("undamped2_discrete.json"))
    assert code == 2 and "r = 0" in err


def test_steer_reaches_target():
    code, report, _ = run_json(
        "steer", path("damped3_discrete.json"), "--x0", "0,0,0", "--x1", "0,0,0", "--target", "1,1,1"
    )
    assert code == 0
    assert np.linalg.norm(np.array(report["results"]["predicted_final_state"]) - 1) < 1e-6
    assert len(report["results"]["inputs"]) == 3


def test_steer_errors():
    assert run("steer", path("damped3_continuous.json"), "--x0", "0,0,0", "--x1", "0,0,0", "--target", "1,1,1")[0] == 2
    code, _, err = run("steer", path("unobservable.json"), "--x0", "0,0", "--x1", "0,0", "--target", "1,1")
    assert code in (0, 3)
    assert run("steer", path("damped3_discrete.json"), "--x0", "0,0", "--x1", "0,0,0", "--target", "1,1,1")[0] == 2
    assert run("steer", path("damped3_discrete.json"), "--x0", "a,b,c", "--x1", "0,0,0", "--target", "1,1,1")[0] == 2


def test_steer_uncontrollable_exit_3(tmp_path):
    f = tmp_path / "sys.json"
    f.write_text(json.dumps({
        "kind": "discrete", "n": 2, "r": 1, "p": 1,
        "a0": [[1, 0], [0, 1]], "a1": [[1, 0], [0, 1]], "b": [[1], [0]], "c": [[1, 0]],
    }))
    code, _, err = run("steer", f, "--x0", "0,0", "--x1", "0,0", "--target", "1,1")
    assert code == 3 and "rank 1, required 2" in err


def test_simulate_and_reconstruct(tmp_path):
    sysfile = path("damped2_discrete.json")
    traj_csv = tmp_path / "traj.csv"
    code, report, _ = run_json("simulate", sysfile, "--x0=1,-2", "--x1=0.5,3", "--steps", 3, "--out", traj_csv)
    assert code == 0 and report["results"]["written"] == str(traj_csv)
    data = read_csv(traj_csv.read_text())
    assert data.shape == (4, 3)
    outputs = tmp_path / "y.csv"
    np.savetxt(outputs, data[:, 2:], delimiter=",")
    code, report, _ = run_json("reconstruct", sysfile, "--outputs", outputs)
    assert code == 0
    assert report["results"]["x0"] == pytest.approx([1, -2], abs=1e-9)
    assert report["results"]["x1"] == pytest.approx([0.5, 3], abs=1e-9)


def test_reconstruct_with_inputs(tmp_path):
    sysfile = path("damped3_discrete.json")
    u = tmp_path / "u.csv"
    u.write_text("# u0\n1\n-1\n0.5\n2\n")
    traj = tmp_path / "traj.csv"
    assert run("simulate", sysfile, "--x0", "1,2,3", "--x1", "0,0,1", "--steps", 5, "--inputs", u, "--out", traj)[0] == 0
    data = read_csv(traj.read_text())
    y = tmp_path / "y.csv"
    np.savetxt(y, data[:, 3:], delimiter=",")
    code, report, _ = run_json("reconstruct", sysfile, "--outputs", y, "--inputs", u)
    assert code == 0
    assert report["results"]["x0"] == pytest.approx([1, 2, 3], abs=1e-8)


def test_reconstruct_exit_codes(tmp_path):
    y = tmp_path / "y.csv"
    y.write_text("1\n0\n2\n5\n")
    code, _, err = run("reconstruct", path("unobservable.json"), "--outputs", y)
    assert code == 3 and "rank" in err
    y.write_text("1\n2\n3\n4\n")
    assert run("reconstruct", path("damped2_discrete.json"), "--outputs", y)[0] == 0
    # more equations than unknowns: n = 1, p = 2, inconsistent samples
    f = tmp_path / "tall.json"
    f.write_text(json.dumps({
        "kind": "discrete", "n": 1, "r": 0, "p": 2,
        "a0": [[0.5]], "a1": [[0.1]], "b": [[]], "c": [[1], [1]],
    }))
    y.write_text("1,2\n3,4\n")
    assert run("reconstruct", f, "--outputs", y)[0] == 4
    y.write_text("1\n2\n")
    assert run("reconstruct", path("damped2_discrete.json"), "--outputs", y)[0] == 2


def test_dual_twice_is_identity(tmp_path):
    for name in ("damped3_continuous.json", "undamped2_continuous.json", "double_integrator.json"):
        once, twice = tmp_path / "once.json", tmp_path / "twice.json"
        assert run("dual", path(name), "--out", once)[0] == 0
        assert run("dual", once, "--out", twice)[0] == 0
        original = load_system(path(name).read_text())
        assert load_system(twice.read_text()) == original
        code, out, _ = run("dual", once)
        assert code == 0 and out == twice.read_text()
    code, _, err = run("dual", path("undamped2_discrete.json"))
    assert code == 2 and "r = 0" in err


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "secondorder.cli", "tf", str(path("undamped2_continuous.json"))],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert 'results.H = "H(s) = (7s^2 - 5)/(s^4 - 6s^2 + 5)"' in proc.stdout
