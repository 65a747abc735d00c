"""Smoothing of piecewise-linear and parametric paths by mollification."""

from ._accel import BACKEND
from .curvature import (CornerData, EpsilonPlan, curvature_upper_bound, exact_corner_curvature,
                        plan_epsilons, solve_epsilon_for_budget, speed_to_curvature_budget)
from .geometry import convex_hull_contains, polyline_length, refine_length, wedge_norm
from .kernel import BUMP, BumpKernel, ScaledKernel
from .paths import (ExtendedPath, ParametricPath, WaypointPath, cube_path, extend,
                    heart_path, staircase_path)
from .quadrature import QuadratureError, QuadratureSpec, integrate
from .smoothing import MollifiedPath

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BUMP", "BumpKernel", "CornerData", "EpsilonPlan", "ExtendedPath",
    "MollifiedPath", "ParametricPath", "QuadratureError", "QuadratureSpec", "ScaledKernel",
    "WaypointPath", "convex_hull_contains", "cube_path", "curvature_upper_bound", "exact_corner_curvature",
    "extend", "heart_path", "integrate", "plan_epsilons", "polyline_length", "refine_length",
    "solve_epsilon_for_budget", "speed_to_curvature_budget", "staircase_path", "wedge_norm",
]
