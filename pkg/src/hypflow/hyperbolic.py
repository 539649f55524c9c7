"""Exact Poincare-disc geometry.

The unit disc carries the complete metric of Gauss curvature -1,
written conformally as e^{2*phi(z)} |dz|^2 with phi(z) = log(2/(1-|z|^2)).
This module provides the conformal factor, conversions between hyperbolic
and Euclidean radii, Mobius recentering maps, and the elementary tanh
lower bound used to estimate disc radii.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "DiscPoint",
    "MobiusMap",
    "poincare_conformal_factor",
    "conformal_factor_of_abs",
    "hyperbolic_to_euclidean_radius",
    "euclidean_to_hyperbolic_radius",
    "tanh_lower_bound_margin",
    "pullback_conformal_factor",
]


@dataclass(frozen=True)
class DiscPoint:
    """A point of the open unit disc, stored as a machine-float pair."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (self.re * self.re + self.im * self.im < 1.0):
            raise DomainError(f"point ({self.re}, {self.im}) is not inside the unit disc")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    @staticmethod
    def from_complex(z: complex) -> "DiscPoint":
        return DiscPoint(z.real, z.imag)


def poincare_conformal_factor(z: DiscPoint) -> float:
    """phi(z) = log(2 / (1 - |z|^2)), the conformal factor of the disc metric."""
    return conformal_factor_of_abs(abs(z))


def conformal_factor_of_abs(rho):
    """phi as a function of |z|; accepts scalars or numpy arrays in [0, 1)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho >= 1.0) or np.any(rho < 0.0):
        raise DomainError("modulus must lie in [0, 1)")
    out = np.log(2.0) - np.log1p(-(rho * rho))
    return float(out) if out.ndim == 0 else out


def hyperbolic_to_euclidean_radius(R: float) -> float:
    """A hyperbolic ball of radius R about 0 is the Euclidean disc of radius tanh(R/2)."""
    if R <= 0.0:
        raise DomainError(f"hyperbolic radius must be positive, got {R}")
    return math.tanh(R / 2.0)


def euclidean_to_hyperbolic_radius(rho: float) -> float:
    """Inverse conversion: rho in (0, 1) maps to 2*atanh(rho)."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"Euclidean radius must lie in (0, 1), got {rho}")
    return 2.0 * math.atanh(rho)


def tanh_lower_bound_margin(x: float) -> float:
    """tanh(x) - (1 - 1/x), nonnegative for every x > 0."""
    if x <= 0.0:
        raise DomainError(f"argument must be positive, got {x}")
    return math.tanh(x) - (1.0 - 1.0 / x)


@dataclass(frozen=True)
class MobiusMap:
    """Holomorphic isometry of the disc sending the origin to ``target``.

    The map is z -> e^{i theta} (z + w) / (1 + conj(w) z) with w chosen so
    that 0 lands on ``target``; any such isometry preserves differences of
    conformal factors, which is what recentering relies on.
    """

    target: DiscPoint
    rotation: float = 0.0

    @property
    def w(self) -> complex:
        return cmath.exp(-1j * self.rotation) * self.target.z

    def __call__(self, z: DiscPoint) -> DiscPoint:
        w = self.w
        image = cmath.exp(1j * self.rotation) * (z.z + w) / (1.0 + w.conjugate() * z.z)
        return DiscPoint.from_complex(image)

    def log_abs_derivative(self, z: DiscPoint) -> float:
        """log |M'(z)| for the conformal-factor transformation rule."""
        w = self.w
        return math.log1p(-abs(w) ** 2) - 2.0 * math.log(abs(1.0 + w.conjugate() * z.z))


def pullback_conformal_factor(
    u: Callable[[DiscPoint], float], M: MobiusMap
) -> Callable[[DiscPoint], float]:
    """Pull a conformal factor back through M: returns z -> u(M(z)) + log|M'(z)|.

    For any two factors u1, u2 the pulled-back difference equals
    (u1 - u2) composed with M, so estimates on differences survive
    recentering exactly.
    """

    def pulled(z: DiscPoint) -> float:
        return u(M(z)) + M.log_abs_derivative(z)

    return pulled
