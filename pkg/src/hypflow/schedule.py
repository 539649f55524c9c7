"""Constructive constants and iterated-rescaling bookkeeping.

Each barrier-plus-curvature-control step costs a radial margin Lambda and
buys a pinched time interval of length eps; rescaling the flow so the
pinched state becomes the new initial state lets the argument repeat, and
the bought intervals compound geometrically. This module implements that
arithmetic exactly: the block count q a horizon T supports, the number N
of affordable iterations inside radius R, the rescaled remaining times
tau_i, the block-to-global time maps, the exit bound T_max, and the two
elementary exponential inequalities that convert T_max into e^{cR}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barriers import shrink_length
from .errors import DomainError

__all__ = [
    "ConstantBundle",
    "IterationSchedule",
    "build_constants",
    "build_schedule",
    "rescale_time_map",
    "gamma_shift",
    "verify_exponential_bounds",
]


@dataclass(frozen=True)
class ConstantBundle:
    """The constants (eps, b, delta, alpha_tol, Lambda, c, R_min) of one setup."""

    eps: float
    b: float
    delta: float
    alpha_tol: float
    Lambda: float
    c: float
    R_min: float

    def __post_init__(self):
        if not 0.0 < self.delta < self.eps:
            raise DomainError(f"delta must lie in (0, eps), got {self.delta}")
        if not 0.0 < self.alpha_tol <= 1.0:
            raise DomainError(f"alpha_tol must lie in (0, 1], got {self.alpha_tol}")
        if self.R_min < self.Lambda:
            raise DomainError("R_min must dominate Lambda")


def build_constants(
    eps: float, b: float, delta: float, alpha_tol: float
) -> ConstantBundle:
    """Assemble the constant bundle from the free parameters.

    Lambda = J(b) + 2 is the radius consumed per iteration; the growth rate
    is c = log(1+2 eps) / (4 Lambda); R_min is the radius threshold above
    which the exponential lower bound e^{cR} is guaranteed.
    """
    Lambda = shrink_length(b, eps) + 2.0
    log_growth = math.log1p(2.0 * eps)
    c = log_growth / (4.0 * Lambda)
    R_min = max(
        (1.0 + 2.0 / log_growth) * Lambda,
        4.0 * Lambda * math.log(2.0 * math.sqrt(1.0 + 2.0 * eps)) / log_growth,
    )
    return ConstantBundle(
        eps=eps, b=b, delta=delta, alpha_tol=alpha_tol,
        Lambda=Lambda, c=c, R_min=R_min,
    )


def _block_start(i: int, eps: float) -> float:
    """Global start time of block i: sum_{k<i} eps (1+2eps)^k = ((1+2eps)^i - 1)/2.

    Closed form rather than a loop, to avoid cancellation.
    """
    return 0.5 * ((1.0 + 2.0 * eps) ** i - 1.0)


@dataclass(frozen=True)
class IterationSchedule:
    """Block bookkeeping for one (T, R) pair.

    tau[i-1] holds tau_i, the rescaled remaining existence time after i
    trapping steps; cumulative_starts[i] is the global time at which block
    i begins; T_max is the exit bound min(T, (exp(floor(R/Lambda)
    log(1+2eps)) - 1)/2).
    """

    T: float
    R: float
    q: int
    N: int
    tau: np.ndarray
    cumulative_starts: np.ndarray
    T_max: float


def build_schedule(T: float, R: float, bundle: ConstantBundle) -> IterationSchedule:
    if T <= 0.0:
        raise DomainError(f"T must be positive, got {T}")
    if R < bundle.Lambda:
        raise DomainError(
            f"R = {R} is below Lambda = {bundle.Lambda}; no iteration is possible"
        )
    eps = bundle.eps
    growth = 1.0 + 2.0 * eps

    # q = max{l >= 0 : block_start(l+1) <= T}; the closed form can be off by
    # one at float edges, so correct it locally
    if T <= eps:
        q = 0
    else:
        q = max(int(math.floor(math.log1p(2.0 * T) / math.log(growth))) - 1, 0)
        while _block_start(q + 2, eps) <= T:
            q += 1
        while q > 0 and _block_start(q + 1, eps) > T:
            q -= 1

    blocks = int(math.floor(R / bundle.Lambda))
    N = min(q, blocks - 1)
    tau = np.array(
        [(T - _block_start(i, eps)) / growth ** i for i in range(1, N + 2)]
    )
    starts = np.array([_block_start(i, eps) for i in range(N + 2)])
    T_max = min(T, 0.5 * (math.exp(blocks * math.log(growth)) - 1.0))
    return IterationSchedule(
        T=T, R=R, q=q, N=N, tau=tau, cumulative_starts=starts, T_max=T_max,
    )


def rescale_time_map(i: int, s: float, eps: float) -> float:
    """Global time of block-local time s in block i.

    map(i, s) = sum_{k<i} eps (1+2eps)^k + (1+2eps)^i s; consecutive blocks
    abut exactly: map(i, eps) = map(i+1, 0).
    """
    if i < 0:
        raise DomainError(f"block index must be nonnegative, got {i}")
    if s < 0.0:
        raise DomainError(f"block-local time must be nonnegative, got {s}")
    return _block_start(i, eps) + (1.0 + 2.0 * eps) ** i * s


def gamma_shift(s: float, delta: float) -> float:
    """gamma_s = (s - delta) / (1 + 2 delta), the start of the flow that
    reaches global time s after running for exactly delta."""
    if s < delta:
        raise DomainError(f"s = {s} must be at least delta = {delta}")
    return (s - delta) / (1.0 + 2.0 * delta)


def verify_exponential_bounds(R: float, bundle: ConstantBundle) -> tuple[float, float]:
    """Margins of the two inequalities that bound T_max below by e^{cR}.

    First: exp(floor(R/Lambda) log(1+2eps)) - 1
           >= exp((1/2)(R/Lambda - 1) log(1+2eps)),
    using e^x - 1 >= e^{x/2} for x >= 2 (valid once R >= R_min).
    Second: (1 / (2 sqrt(1+2eps))) exp((R / 2Lambda) log(1+2eps)) >= e^{cR}.
    Both margins are nonnegative for every R >= R_min, hence
    min(T, T_max-bound) >= min(T, e^{cR}).
    """
    if R < bundle.R_min:
        raise DomainError(f"R = {R} is below R_min = {bundle.R_min}")
    eps = bundle.eps
    log_growth = math.log1p(2.0 * eps)
    blocks = math.floor(R / bundle.Lambda)
    lhs1 = math.exp(blocks * log_growth) - 1.0
    rhs1 = math.exp(0.5 * (R / bundle.Lambda - 1.0) * log_growth)
    lhs2 = math.exp(0.5 * R / bundle.Lambda * log_growth) / (2.0 * math.sqrt(1.0 + 2.0 * eps))
    rhs2 = math.exp(bundle.c * R)
    return lhs1 - rhs1, lhs2 - rhs2
