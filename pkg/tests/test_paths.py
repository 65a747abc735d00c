import math

import numpy as np
import pytest

from mollipath.paths import (CUBE_TOUR, ExtendedPath, ParametricPath, WaypointPath, cube_path,
                             eval_path, extend, function_path, heart_path, staircase_path,
                             two_segment_path)

SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]


def test_waypoint_basics():
    p = WaypointPath(SQUARE, closed=True)
    assert p.dimension == 2 and p.n_segments == 4 and p.domain == (0.0, 4.0)
    assert p.length() == 4.0 and p.length(1) == 4.0
    np.testing.assert_array_equal(p.vertices[-1], [0, 0])
    np.testing.assert_allclose(p.evaluate(2.5), [0.5, 1.0])


def test_knots_are_bit_exact():
    pts = np.array([[0.1, 0.7], [1 / 3, 2.2], [-5.5, 1e-9]])
    p = WaypointPath(pts)
    out = p.evaluate(np.array([0.0, 1.0, 2.0]))
    assert np.array_equal(out, pts)


@pytest.mark.parametrize("pts", [
    [[0, 0]],
    [[0, 0], [0, 0]],
    [[0, 0], [1, 1], [1, 1]],
    [[0, 0, 0, 0], [1, 1, 1, 1]],
    [[0, 0], [np.nan, 1]],
    [1, 2, 3],
])
def test_invalid_waypoints(pts):
    with pytest.raises(ValueError):
        WaypointPath(pts)


def test_closed_zero_seam_rejected():
    with pytest.raises(ValueError):
        WaypointPath([[0, 0], [1, 0], [0, 0]], closed=True)


def test_native_domain_enforced():
    with pytest.raises(ValueError):
        WaypointPath(SQUARE).evaluate(3.5)


def test_clamp_extension():
    p = extend(two_segment_path([0, 0], [1, 0], [1, 1]))
    assert p.policy == "clamp"
    np.testing.assert_array_equal(p(np.array([-3.0, 5.0])), [[0, 0], [1, 1]])


def test_periodic_extension():
    p = extend(WaypointPath(SQUARE, closed=True))
    assert p.policy == "periodic" and p.period == 4.0
    np.testing.assert_allclose(p(np.array([-0.5, 4.5, 9.0])), [[0, 0.5], [0.5, 0], [1, 0]])


def test_periodic_requires_closed():
    with pytest.raises(ValueError):
        ExtendedPath(WaypointPath(SQUARE), "periodic")
    with pytest.raises(ValueError):
        ExtendedPath(WaypointPath(SQUARE), "mirror")


def test_breakpoints():
    p = extend(WaypointPath(SQUARE, closed=True))
    np.testing.assert_array_equal(p.breakpoints(-1.5, 1.2), [-1.0, 0.0, 1.0])
    q = extend(WaypointPath(SQUARE))
    np.testing.assert_array_equal(q.breakpoints(-2.0, 1.5), [0.0, 1.0])


def test_heart():
    h = heart_path()
    assert h.closed and h.domain == (0.0, 2 * math.pi)
    # r(0) = 2, r(pi/2) = 0, r(3 pi/2) = 4
    np.testing.assert_allclose(h.evaluate(0.0), [2.0, 0.0], atol=1e-15)
    # sqrt(|cos(pi/2)|) is ~1e-8 in floating point
    np.testing.assert_allclose(h.evaluate(math.pi / 2), [0.0, 0.0], atol=1e-8)
    np.testing.assert_allclose(h.evaluate(1.5 * math.pi), [0.0, -4.0], atol=1e-14)
    e = extend(h)
    np.testing.assert_allclose(e(2 * math.pi + 0.3), h.evaluate(0.3), atol=1e-14)
    assert set(e.breakpoints(0.0, 2 * math.pi)) >= {0.0, math.pi / 2, 1.5 * math.pi}


def test_staircase():
    s = staircase_path(3)
    vals = extend(s)(np.array([-5.0, -0.5, 0.0, 0.2, 1.0, 1.5, 2.5, 9.0]))[:, 0]
    np.testing.assert_array_equal(vals, [0, 0, 0, 1, 1, 2, 3, 3])
    with pytest.raises(ValueError):
        staircase_path(0)


def test_cube_tour():
    c = cube_path()
    assert c.dimension == 3 and c.n_segments == 7
    assert len({tuple(v) for v in CUBE_TOUR}) == 8
    np.testing.assert_array_equal(np.linalg.norm(c.segment_vectors, axis=1), 1.0)
    assert c.length() == 7.0


def test_parametric_validation():
    with pytest.raises(ValueError):
        ParametricPath(components=())
    with pytest.raises(ValueError):
        ParametricPath(components=(np.sin,), domain=(1.0, 1.0))
    with pytest.raises(ValueError):
        ParametricPath(components=(np.sin,), closed=True)


def test_function_path_whole_line():
    f = function_path(np.abs, kinks=[0.0])
    np.testing.assert_array_equal(eval_path(f, np.array([-2.0, 3.0]))[:, 0], [2.0, 3.0])
    assert extend(f).breakpoints(-1, 1).tolist() == [0.0]
    # constant callables broadcast
    g = function_path(lambda t: 4.0)
    assert extend(g)(np.zeros(3)).shape == (3, 1)
