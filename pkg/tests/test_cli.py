import json
import subprocess
import sys

import pytest

from maxsurf.cli import REPORT_KEYS, main


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr().out


def test_validate_bundled(capsys):
    code, out = run(capsys, "validate", "scherk")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert set(REPORT_KEYS) <= set(d)
    assert [g["case"] for g in d["group_case"] if "case" in g] == ["R1"]


def test_example_then_validate(capsys, tmp_path):
    p = tmp_path / "s.json"
    code, _ = run(capsys, "example", "scherk", "--params", "b=0.25", "--out", str(p))
    assert code == 0
    code, out = run(capsys, "periods", str(p))
    d = json.loads(out)
    assert code == 0
    assert abs(d["periods"]["lattice"]["end_b"]["real_part"][0] - 3.141592653589793 / (0.5 * 1.0625)) < 1e-8


def test_census_and_topology(capsys):
    code, out = run(capsys, "census", "riemann", "--tol", "1e-10")
    d = json.loads(out)
    assert code == 0 and d["singularities"]["k1"] == 2 and len(d["ends"]["ends"]) == 2
    code, out = run(capsys, "check-topology", "doubly")
    d = json.loads(out)
    assert code == 0 and d["topology"]["lhs"] == d["topology"]["rhs"] == 2


def test_classify_isometry(capsys):
    code, out = run(capsys, "classify-isometry", "1", "0", "0", "0", "-1", "0", "0", "0", "-1", "2", "0", "0")
    assert code == 0
    cls = json.loads(out)["class"]
    # R0 is the hyperbolic normal form with epsilon = -1 and zero angle
    assert cls["kind"] == "HyperbolicScrew" and cls["epsilon"] == -1 and cls["lambda"] == 2


def test_mesh_command(capsys, tmp_path):
    p = tmp_path / "m.obj"
    code, out = run(capsys, "mesh", "scherk", "--resolution", "16", "--copies", "2", "--out", str(p))
    d = json.loads(out)
    assert code == 0 and d["spacelike_edges"] and d["projection_injective"]
    assert p.read_text().startswith("# maximal surface mesh")


def test_failure_exit_codes(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"rank": 1}')
    code, out = run(capsys, "validate", str(p))
    assert code == 2 and not json.loads(out)["passed"]


def test_failing_checks_exit_nonzero(capsys, tmp_path):
    from maxsurf.surface_io import bundled_path

    obj = json.loads(bundled_path("scherk").read_text())
    obj["rank"] = 2
    p = tmp_path / "r.json"
    p.write_text(json.dumps(obj))
    code, out = run(capsys, "validate", str(p), "--no-groups")
    assert code == 1 and not json.loads(out)["passed"]


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "maxsurf.cli", "classify-isometry", *"1 0 0 0 1 0 0 0 1 0 3 0".split()],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["class"]["kind"] == "Translation"


def test_bad_params(capsys):
    with pytest.raises(SystemExit):
        main(["example", "scherk", "--params", "b"])
