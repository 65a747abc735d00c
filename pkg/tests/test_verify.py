import json
import math

import numpy as np
import pytest

from mollipath.paths import WaypointPath, cube_path, staircase_path
from mollipath.smoothing import MollifiedPath
from mollipath.verify import (COUNTEREXAMPLE_KINKS, COUNTEREXAMPLE_WINDOW, CheckReport,
                              check_convexity_preservation, check_curvature_budget,
                              check_dominance, check_hull_enclosure, check_length_non_increase,
                              check_local_convexity_window, check_monotonicity,
                              check_quasiconvexity, check_uniform_convergence,
                              counterexample_function, mollify_1d, reports_document,
                              sublevel_margin)


def test_counterexample_function():
    np.testing.assert_array_equal(counterexample_function([-1.0, 0.25, 0.5, 0.75]),
                                  [0.0, 0.25, 0.5, 0.25])


def test_counterexample_wide_kernel_fails_and_lies_below():
    (rep,) = check_local_convexity_window(counterexample_function, COUNTEREXAMPLE_WINDOW,
                                          [3.2], kinks=COUNTEREXAMPLE_KINKS)
    assert not rep.passed and rep.worst_violation < 0
    assert rep.details["below_source"]


def test_counterexample_narrow_kernel_on_subwindow():
    (rep,) = check_local_convexity_window(counterexample_function, COUNTEREXAMPLE_WINDOW,
                                          [0.45], kinks=COUNTEREXAMPLE_KINKS, shrink=True)
    assert rep.passed
    (empty,) = check_local_convexity_window(counterexample_function, COUNTEREXAMPLE_WINDOW,
                                            [0.6], kinks=COUNTEREXAMPLE_KINKS, shrink=True)
    assert empty.skipped


@pytest.mark.parametrize("fn,kinks", [(np.abs, [0.0]), (np.square, [])])
def test_convexity_and_dominance(fn, kinks):
    assert check_convexity_preservation(fn, 0.7, kinks=kinks).passed
    assert check_dominance(fn, 0.7, kinks=kinks).passed


def test_dominance_fails_for_concave():
    rep = check_dominance(lambda t: -np.abs(t), 0.5, kinks=[0.0])
    assert not rep.passed and rep.worst_violation < -0.1


def test_convexity_fails_for_nonconvex():
    assert not check_convexity_preservation(np.sin, 0.3, grid=(0, 3, 301)).passed


def test_monotone_staircase():
    s = staircase_path(3)
    assert check_monotonicity(s, 0.5, kinks=s.kinks).passed
    assert not check_monotonicity(s, 0.5, kinks=s.kinks, decreasing=True).passed


def test_sublevel_margin():
    assert sublevel_margin([3, 1, 0, 2, 5]) == 0.0
    assert sublevel_margin([0, 2, 0]) == -2.0
    assert sublevel_margin([1.0]) == 0.0


def test_quasiconvex():
    assert check_quasiconvexity(lambda t: np.sqrt(np.abs(t)), 0.5, kinks=[0.0]).passed
    bumpy = lambda t: np.minimum(np.abs(t + 1), np.abs(t - 1))
    assert not check_quasiconvexity(bumpy, 0.3, kinks=[-1, 0, 1]).passed


def test_uniform_convergence():
    rep = check_uniform_convergence(np.abs, 1.0, [1, 0.5, 0.25, 0.1], kinks=[0.0])
    assert rep.passed
    np.testing.assert_allclose(rep.details["sup_errors"],
                               0.334453997709975 * np.array([1, 0.5, 0.25, 0.1]), rtol=1e-8)
    assert check_uniform_convergence(np.abs, math.inf, [1.0]).skipped
    assert check_uniform_convergence(np.abs, None, [1.0]).skipped
    # a wrong Lipschitz constant is caught
    assert not check_uniform_convergence(lambda t: 5 * np.abs(t), 1.0, [1.0], kinks=[0.0]).passed


def test_hull_and_length_random_path(rng):
    path = WaypointPath(rng.uniform(-2, 2, size=(6, 3)))
    mol = MollifiedPath(path, 0.6)
    assert check_hull_enclosure(path, mol, sample_count=2000).passed
    rep = check_length_non_increase(path, mol)
    assert rep.passed and rep.details["mollified_length"] < rep.details["source_length"]


def test_hull_detects_escape():
    # a mollified path compared against a different, shrunken source
    path = WaypointPath([[0, 0], [1, 0], [1, 1]])
    other = WaypointPath([[0, 0], [0.5, 0], [0.5, 0.5]])
    assert not check_hull_enclosure(other, MollifiedPath(path, 0.3), sample_count=500).passed


def test_curvature_budget():
    cube = cube_path()
    assert check_curvature_budget(cube, 0.4, 10.0).passed
    assert not check_curvature_budget(cube, 0.4, 1.0).passed


def test_mollify_1d_shapes():
    f, F = mollify_1d(np.abs, 0.5, [0.0, 1.0], kinks=[0.0])
    assert f.shape == F.shape == (2,)


def test_reports_document():
    reps = [CheckReport("a", True, 0.0, 3), CheckReport("b", False, -1.0, 4, details={"x": 1})]
    doc = json.loads(reports_document(reps))
    assert doc["passed"] is False
    assert doc["reports"][1] == {"name": "b", "passed": False, "worstViolation": -1.0,
                                 "samples": 4, "tolerance": 0.0, "skipped": False,
                                 "details": {"x": 1}}
