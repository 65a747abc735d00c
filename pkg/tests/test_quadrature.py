import math

import numpy as np
import pytest

from mollipath.quadrature import (MERGE_TOL, QuadratureError, QuadratureSpec, integrate,
                                  integrate_batch, panel_edges)


def test_polynomial_exact():
    assert integrate(lambda x: x**5 - 3 * x**2, -1.0, 2.0) == pytest.approx(10.5 - 9.0, abs=1e-13)


def test_exp_and_sin():
    assert integrate(np.exp, 0.0, 1.0) == pytest.approx(math.e - 1.0, abs=1e-13)
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)


def test_kink_needs_breakpoint_for_speed_not_for_answer():
    val = integrate(np.abs, -1.0, 2.0, breakpoints=[0.0])
    assert val == pytest.approx(2.5, abs=1e-14)
    assert integrate(np.abs, -1.0, 2.0) == pytest.approx(2.5, abs=1e-9)


def test_sqrt_singularity_converges():
    # integral of sqrt(x) on [0, 1] is 2/3; the derivative blows up at 0
    assert integrate(np.sqrt, 0.0, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_degenerate_interval_is_zero():
    assert integrate(np.exp, 1.0, 1.0) == 0.0


def test_reversed_bounds_rejected():
    with pytest.raises(ValueError):
        integrate(np.exp, 1.0, 0.0)


def test_scalar_callable_accepted():
    assert integrate(lambda x: math.cos(x), 0.0, 1.0) == pytest.approx(math.sin(1.0), abs=1e-13)


def test_jump_without_breakpoint_fails_with_estimate():
    spec = QuadratureSpec(tolerance=1e-14, max_depth=5)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: (x > 1 / 3).astype(float), 0.0, 1.0, spec=spec)
    assert info.value.estimate == pytest.approx(2 / 3, abs=1e-2)
    assert info.value.error > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(tolerance=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_depth=0)


def test_panel_edges_merge_and_clip():
    edges = panel_edges(0.0, 1.0, [0.5, 0.5 + MERGE_TOL / 2, -3.0, 1.0, 0.25])
    np.testing.assert_array_equal(edges, [0.0, 0.25, 0.5, 1.0])
    np.testing.assert_array_equal(panel_edges(0.0, 1.0, [1.0 - MERGE_TOL / 2]), [0.0, 1.0])


def test_batch_matches_individual():
    powers = np.arange(6)
    edges = [np.array([0.0, 0.3, 1.0])] * powers.size
    vals = integrate_batch(lambda item, x: x ** powers[item], edges)
    np.testing.assert_allclose(vals, 1.0 / (powers + 1.0), atol=1e-14)


def test_batch_skips_empty_items():
    vals = integrate_batch(lambda item, x: np.ones_like(x), [np.array([2.0, 2.0]), np.array([0.0, 3.0])])
    np.testing.assert_allclose(vals, [0.0, 3.0])


def test_no_false_convergence_for_shifted_kernel_moments():
    # linear-times-kernel integrands make the coarse/fine difference of a
    # panel linear in the shift, with an accidental zero near t = 1.29
    from mollipath.kernel import BUMP
    k = BUMP.scaled(0.7)
    ts = np.linspace(0.7, 3.0, 401)
    errs = [integrate(lambda s: (t - s) * k(s), -0.7, 0.7) - t for t in ts]
    assert np.max(np.abs(errs)) < 1e-10
