import json

import numpy as np
import pytest

from mollipath import cli
from mollipath.documents import InputError, parse_waypoints, read_samples, waypoints_document
from mollipath.paths import WaypointPath

CORNER = {"dimension": 2, "closed": False, "points": [[0, 0], [1, 0], [1, 1]]}
SQUARE = {"dimension": 2, "closed": True, "points": [[0, 0], [1, 0], [1, 1], [0, 1]]}


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="w.json"):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_round_trip():
    path = parse_waypoints(json.dumps(SQUARE))
    assert path.closed and path.n_segments == 4
    again = parse_waypoints(waypoints_document(path))
    np.testing.assert_array_equal(again.points, path.points)


@pytest.mark.parametrize("text", [
    "", "not json", json.dumps({"dimension": 2, "closed": False}),
    json.dumps({"dimension": 4, "closed": False, "points": [[0, 0], [1, 1]]}),
    json.dumps({"dimension": 2, "closed": False, "points": [[0, 0, 0], [1, 1, 1]]}),
    json.dumps({"dimension": 2, "closed": False, "points": [[0, 0], [0, 0]]}),
    json.dumps({**CORNER, "extra": 1}),
])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_waypoints(text)


def test_smooth_collinear_has_zero_curvature(capsys, write):
    doc = {"dimension": 2, "closed": False, "points": [[0, 0], [1, 2], [2, 4]]}
    code, out, _ = run(capsys, "smooth", "-i", write(doc), "--eps", 0.7, "--samples-per-unit", 20)
    assert code == 0
    cols = read_samples(out)
    assert list(cols) == ["t", "x", "y", "dx", "dy", "kappa"]
    assert np.max(cols["kappa"]) <= 1e-9


def test_smooth_planned_corner_within_budget(capsys, write):
    code, out, _ = run(capsys, "smooth", "-i", write(CORNER), "--kappa-max", 10)
    assert code == 0
    cols = read_samples(out)
    assert cols["t"].size == 401
    assert np.max(cols["kappa"]) <= 10 * (1 + 1e-6)


def test_smooth_identity_away_from_knots(capsys, write):
    code, out, _ = run(capsys, "smooth", "-i", write(CORNER), "--eps", 0.2,
                       "--samples-per-unit", 10)
    cols = read_samples(out)
    far = np.abs(cols["t"] - 1.0) >= 0.2
    far &= (cols["t"] >= 0.2) & (cols["t"] <= 1.8)
    src = WaypointPath(CORNER["points"]).evaluate(cols["t"][far])
    np.testing.assert_allclose(cols["x"][far], src[:, 0], atol=1e-8)
    np.testing.assert_allclose(cols["y"][far], src[:, 1], atol=1e-8)


def test_smooth_svg(capsys, write, tmp_path):
    out_file = tmp_path / "c.svg"
    code, _, _ = run(capsys, "smooth", "-i", write(SQUARE), "--eps", 0.3, "--format", "svg",
                     "-o", out_file, "--samples-per-unit", 20)
    text = out_file.read_text()
    assert code == 0 and text.startswith("<svg") and text.count("<polyline") == 2
    assert text.count("κ=") == 4


def test_smooth_needs_exactly_one_budget(capsys, write):
    path = write(CORNER)
    assert run(capsys, "smooth", "-i", path)[0] == 1
    assert run(capsys, "smooth", "-i", path, "--eps", 0.2, "--kappa-max", 3)[0] == 1
    assert run(capsys, "smooth", "-i", path, "--eps", 0.1, 0.2, 0.3)[0] == 1
    assert run(capsys, "smooth", "-i", path, "--eps", -0.1)[0] == 1


def test_plan_square(capsys, write):
    code, out, _ = run(capsys, "plan", "-i", write(SQUARE), "--kappa-max", 10)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "corner_index,epsilon,bound"
    eps = [float(r.split(",")[1]) for r in lines[1:5]]
    assert len(set(eps)) == 1
    assert lines[-2].startswith("global_epsilon,") and lines[-1] == "exact,true"


def test_plan_collinear(capsys, write):
    doc = {"dimension": 2, "closed": False, "points": [[0, 0], [1, 0], [2, 0]]}
    code, out, _ = run(capsys, "plan", "-i", write(doc), "--kappa-max", 1, "--eps-min", 1e-4)
    assert code == 0
    assert "1,0.0,0.0" in out and "global_epsilon,0.0001" in out


def test_plan_speed_budget(capsys, write):
    code, out, err = run(capsys, "plan", "-i", write(SQUARE), "--speed", 1, 1, 3, 1)
    assert code == 0
    bounds = [float(r.split(",")[2]) for r in out.splitlines()[1:5]]
    np.testing.assert_allclose(bounds, 1 / 3)
    assert "exact,false" in out and "warning" in err


def test_plan_rejects_eps_and_missing_budget(capsys, write):
    assert run(capsys, "plan", "-i", write(SQUARE))[0] == 1
    assert run(capsys, "plan", "-i", write(SQUARE), "--eps", 0.3)[0] == 1


def test_analyze_empty_file(capsys, write):
    code, out, err = run(capsys, "analyze", "-i", write(""), "--eps", 0.3)
    assert code == 1 and out == "" and "input error" in err


def test_analyze_waypoints(capsys, write):
    code, out, _ = run(capsys, "analyze", "-i", write(SQUARE), "--kappa-max", 10,
                       "--samples", 2000)
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert [r["name"] for r in doc["reports"]] == ["hull_enclosure", "length_non_increase",
                                                   "curvature_budget"]


def test_analyze_counterexample(capsys):
    code, out, _ = run(capsys, "analyze", "--demo", "counterexample")
    doc = json.loads(out)
    assert code == 3 and not doc["passed"]
    assert doc["reports"][0]["details"]["below_source"]
    code, out, _ = run(capsys, "analyze", "--demo", "counterexample", "--eps", 0.45, "--shrink")
    assert code == 0


def test_analyze_staircase(capsys):
    code, out, _ = run(capsys, "analyze", "--demo", "staircase", "--samples", 2000)
    names = [r["name"] for r in json.loads(out)["reports"]]
    assert code == 0 and "monotonicity" in names and "quasiconvexity" in names


def test_budget_requires_waypoints(capsys):
    assert run(capsys, "smooth", "--demo", "heart", "--kappa-max", 1)[0] == 1


def test_usage_error_is_input_error(capsys):
    assert run(capsys, "smooth", "--demo", "nope")[0] == 1
    assert run(capsys)[0] == 1


def test_numerical_failure_exit_code(capsys, write, monkeypatch):
    from mollipath.quadrature import QuadratureError

    def boom(*a, **k):
        raise QuadratureError("no convergence")
    monkeypatch.setattr(cli, "_sample", boom)
    assert run(capsys, "smooth", "-i", write(CORNER), "--eps", 0.2)[0] == 2


def test_demo_cube(capsys, tmp_path):
    code, out, _ = run(capsys, "demo", "cube", "--outdir", tmp_path, "--samples-per-unit", 20)
    assert code == 0
    src = read_samples((tmp_path / "cube_source.csv").read_text())
    mol = read_samples((tmp_path / "cube_eps1_1_1.csv").read_text())
    assert list(src) == ["t", "x", "y", "z"]
    assert list(mol) == ["t", "x", "y", "z", "dx", "dy", "dz", "kappa"]
    lines = out.strip().splitlines()
    l2 = [float(line.split("l2=")[1]) for line in lines]
    assert l2[0] == 7.0 and l2[1] < l2[0]


def test_demo_staircase_monotone(capsys, tmp_path):
    code, _, _ = run(capsys, "demo", "staircase", "--outdir", tmp_path, "--samples-per-unit", 50)
    mol = read_samples((tmp_path / "staircase_eps0.5.csv").read_text())
    assert code == 0 and list(mol) == ["t", "x", "dx"]
    assert np.all(np.diff(mol["x"]) >= -1e-9)


def test_deterministic_output(capsys, write):
    path = write(CORNER)
    a = run(capsys, "smooth", "-i", path, "--eps", 0.3, "--samples-per-unit", 10)[1]
    b = run(capsys, "smooth", "-i", path, "--eps", 0.3, "--samples-per-unit", 10)[1]
    assert a == b
