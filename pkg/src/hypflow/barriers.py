"""Closed-form barrier Ricci flows and their explicit constants.

A flow that is initially pinched between (1-b) h and (1+b) h on a large
enough disc stays trapped between two explicit exact flows: rescaled
hyperbolic metrics living on Euclidean discs of radii alpha_disc (upper)
and mu (lower). Everything here is exact arithmetic: the radial margin
J(b) consumed per trapping step, the Euclidean radii j, j0 of the working
discs, the barrier disc radii, and the two sandwich margins whose
nonnegativity makes the trap close at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hyperbolic import DiscPoint, conformal_factor_of_abs

__all__ = [
    "BarrierParams",
    "shrink_length",
    "alpha_disc_of",
    "mu_of",
    "compute_barrier_params",
    "upper_barrier_value",
    "lower_barrier_value",
    "check_sandwich_conditions",
    "barrier_profile",
    "DEFAULT_EPS",
]

# free pinching-duration parameter; the underlying universal constant is
# non-constructive, so it is exposed as configuration
DEFAULT_EPS = 0.05


def _validate_b_eps(b: float, eps: float):
    if not 0.0 < b <= 0.5:
        raise DomainError(f"b must lie in (0, 1/2], got {b}")
    if eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps}")


def shrink_length(b: float, eps: float = DEFAULT_EPS) -> float:
    """J(b) = 2 + max(4 e^{10 eps}, 12) / b, the radial margin per trapping step."""
    _validate_b_eps(b, eps)
    return 2.0 + max(4.0 * math.exp(10.0 * eps), 12.0) / b


def alpha_disc_of(j: float, eps: float) -> float:
    """Upper-barrier disc radius: strictly increasing in j, 0 at 0, 1 at 1.

    Evaluated as j / sqrt(1 - (1 - j^2) e^{-4 eps}), the form of
    sqrt(e^{4 eps} j^2 / (e^{4 eps} + j^2 - 1)) that stays ordered between
    j and 1 even when j has saturated to 1 in double precision.
    """
    if not 0.0 <= j <= 1.0:
        raise DomainError(f"j must lie in [0, 1], got {j}")
    value = j / math.sqrt(1.0 - (1.0 - j * j) * math.exp(-4.0 * eps))
    return min(max(value, j), 1.0)


def mu_of(j: float, b: float, eps: float) -> float:
    """Lower-barrier disc radius, exceeding 1 so the whole unit disc is covered."""
    growth = math.exp((5.0 - 4.0 * b) / (1.0 - b) * eps)
    inner = 1.0 - (1.0 - j * j) * growth
    if inner <= 0.0:
        raise RuntimeError(
            "lower-barrier radius undefined: 1 - e^{-10 eps} < j^2 failed, "
            "which the derived bound on j should make unreachable"
        )
    # mu >= 1 holds mathematically for every j in [0, 1]; the clamp only
    # absorbs last-ulp rounding near saturation
    return max(j / math.sqrt(inner), 1.0)


@dataclass(frozen=True)
class BarrierParams:
    """All quantities of one barrier construction at parameters (b, eps).

    J is the hyperbolic radial margin, j and j0 the Euclidean radii of the
    inner working disc and its slightly larger companion, alpha_disc and mu
    the barrier disc radii. In double precision j saturates to 1 once
    J - 2 > ~40, collapsing the strict orderings j < alpha_disc < 1 < mu to
    equalities; the representable regime (e.g. b = 1/2) keeps them strict.
    """

    b: float
    eps: float
    J: float
    j: float
    j0: float
    alpha_disc: float
    mu: float

    def __post_init__(self):
        _validate_b_eps(self.b, self.eps)
        if not (self.j <= self.j0 and self.j <= self.alpha_disc <= 1.0 <= self.mu):
            raise DomainError("barrier radii violate j <= alpha_disc <= 1 <= mu")

    @property
    def upper_rate_scale(self) -> float:
        """(1+b) alpha^2, the time scale of the upper barrier flow."""
        return (1.0 + self.b) * self.alpha_disc ** 2

    @property
    def lower_rate_scale(self) -> float:
        """(1-b) mu^2, the time scale of the lower barrier flow."""
        return (1.0 - self.b) * self.mu ** 2


def compute_barrier_params(b: float, eps: float = DEFAULT_EPS) -> BarrierParams:
    _validate_b_eps(b, eps)
    J = shrink_length(b, eps)
    j = math.tanh((J - 2.0) / 2.0)
    j0 = math.tanh((J - 1.5) / 2.0)
    # the tanh lower bound guarantees both of these
    if j < max(1.0 - 0.5 * b * math.exp(-10.0 * eps), 1.0 - b / 6.0):
        raise RuntimeError("derived lower bound on j failed; tanh bound violated")
    return BarrierParams(
        b=b,
        eps=eps,
        J=J,
        j=j,
        j0=j0,
        alpha_disc=alpha_disc_of(j, eps),
        mu=mu_of(j, b, eps),
    )


def upper_barrier_value(z: DiscPoint, t: float, params: BarrierParams) -> float:
    """Conformal factor of the upper barrier flow at (z, t).

    H_alpha(z, t) = phi(z/alpha) + (1/2) log(1+b)
                  + (1/2) log(1 + 2t / ((1+b) alpha^2)),
    defined for |z| < alpha_disc, strictly increasing in t.
    """
    rho = abs(z)
    if rho >= params.alpha_disc:
        raise DomainError(
            f"|z| = {rho} is outside the upper barrier disc of radius {params.alpha_disc}"
        )
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    b = params.b
    return (
        conformal_factor_of_abs(rho / params.alpha_disc)
        + 0.5 * math.log1p(b)
        + 0.5 * math.log1p(2.0 * t / params.upper_rate_scale)
    )


def lower_barrier_value(z: DiscPoint, t: float, params: BarrierParams) -> float:
    """Conformal factor of the lower barrier flow at (z, t).

    H_mu(z, t) = phi(z/mu) + (1/2) log(1-b)
               + (1/2) log(1 + 2t / ((1-b) mu^2));
    mu >= 1, so the whole unit disc is admissible.
    """
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    b = params.b
    return (
        conformal_factor_of_abs(abs(z) / params.mu)
        + 0.5 * math.log1p(-b)
        + 0.5 * math.log1p(2.0 * t / params.lower_rate_scale)
    )


def check_sandwich_conditions(params: BarrierParams) -> tuple[float, float]:
    """Margins (alpha^2 - 1/(1+b), 1/(1-b) - mu^2), both nonnegative.

    Their nonnegativity is exactly what turns the two barrier bounds at the
    origin into (1-b) <= e^{2(H - phi)} / (1+2t) <= (1+b).
    """
    upper = params.alpha_disc ** 2 - 1.0 / (1.0 + params.b)
    lower = 1.0 / (1.0 - params.b) - params.mu ** 2
    return upper, lower


def barrier_profile(rho, t: float, params: BarrierParams, which: str) -> np.ndarray:
    """Relative barrier field H - phi over an array of Euclidean radii.

    This is the form the radial solver consumes: for which='upper'
    (H_alpha - phi)(rho, t), for which='lower' (H_mu - phi)(rho, t).
    """
    rho = np.asarray(rho, dtype=float)
    if which == "upper":
        c, lam, scale = params.alpha_disc, 1.0 + params.b, params.upper_rate_scale
        if np.any(rho >= c):
            raise DomainError("grid extends past the upper barrier disc")
    elif which == "lower":
        c, lam, scale = params.mu, 1.0 - params.b, params.lower_rate_scale
    else:
        raise ValueError(f"which must be 'upper' or 'lower', got {which!r}")
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    # phi(rho/c) - phi(rho) = log((1 - rho^2) / (1 - (rho/c)^2))
    shape = np.log1p(-(rho * rho)) - np.log1p(-((rho / c) ** 2))
    return shape + 0.5 * math.log(lam) + 0.5 * math.log1p(2.0 * t / scale)
