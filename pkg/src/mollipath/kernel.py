"""The C-infinity bump mollifier and its scaled family.

    phi(x) = c1 * exp(-1 / (1 - x**2))   for |x| < 1,   0 otherwise

``c1`` makes ``phi`` integrate to one.  The scaled kernel is
``phi_eps(x) = phi(x / eps) / eps`` with support ``[-eps, eps]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import backend
from .quadrature import QuadratureSpec, integrate

# accuracy for the normalization constant and for CDF evaluations
NORMALIZATION_SPEC = QuadratureSpec(tolerance=1e-12, max_depth=40)
CDF_SPEC = QuadratureSpec(tolerance=1e-13, max_depth=40)


def _unnormalized(u):
    return backend.bump(u, 1.0)


def _check_eps(eps):
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


class BumpKernel:
    """The normalized bump ``phi``; ``c1`` is computed once by quadrature."""

    def __init__(self, spec: QuadratureSpec = NORMALIZATION_SPEC):
        mass = integrate(_unnormalized, -1.0, 1.0, [0.0], spec)
        self.normalization = 1.0 / mass
        self.sup_norm = self.normalization * math.exp(-1.0)

    def __repr__(self):
        return f"BumpKernel(normalization={self.normalization!r})"

    def __call__(self, x):
        return _scalar_or_array(backend.bump(np.asarray(x, dtype=float), self.normalization), x)

    def derivative(self, x, order: int = 1):
        """Analytic derivative of ``phi`` of order 0, 1 or 2."""
        if order not in (0, 1, 2):
            raise ValueError(f"unsupported derivative order {order}")
        vals = backend.bump_derivative(np.asarray(x, dtype=float), order, self.normalization)
        return _scalar_or_array(vals, x)

    def cdf(self, x):
        """``integral of phi over (-inf, x]``, by quadrature with a knot at 0."""
        vals = backend.bump_cdf(np.asarray(x, dtype=float), self.normalization,
                                CDF_SPEC.tolerance, CDF_SPEC.max_depth)
        return _scalar_or_array(vals, x)

    def scaled(self, eps: float) -> "ScaledKernel":
        return ScaledKernel(self, eps)


@dataclass(frozen=True)
class ScaledKernel:
    base: BumpKernel
    epsilon: float
    support: tuple = field(init=False)

    def __post_init__(self):
        _check_eps(self.epsilon)
        object.__setattr__(self, "support", (-self.epsilon, self.epsilon))

    def __call__(self, x):
        return self.derivative(x, 0)

    def derivative(self, x, order: int = 1):
        x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        scale = self.epsilon ** (-1 - order)
        return self.base.derivative(np.divide(x, self.epsilon), order) * scale

    def cdf(self, x):
        return self.base.cdf(np.divide(x, self.epsilon))

    @property
    def sup_norm(self) -> float:
        return self.base.sup_norm / self.epsilon


BUMP = BumpKernel()


def eval_kernel(x):
    """``phi(x)``; exactly zero for ``|x| >= 1``."""
    return BUMP(x)


def eval_scaled(x, eps: float):
    """``phi_eps(x) = phi(x / eps) / eps``."""
    _check_eps(eps)
    return BUMP.scaled(eps)(x)


def kernel_derivative(x, eps: float, order: int):
    """Derivative of ``phi_eps`` of order 1 or 2 (closed form, chain rule)."""
    _check_eps(eps)
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}; expected 1 or 2")
    return BUMP.scaled(eps).derivative(x, order)


def kernel_cdf(x, eps: float):
    """``Phi_eps(x)``, the mass of ``phi_eps`` on ``(-inf, x]``."""
    _check_eps(eps)
    return BUMP.scaled(eps).cdf(x)
