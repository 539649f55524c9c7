"""Gauss curvature extraction and control-time measurement.

For g = e^{2v} h the Gauss curvature is K = e^{-2v} (-Lap_h v - 1),
computed with the same discrete operator the solver uses so that solver
and observer share one discretization error. The observable of interest
is the rescaled center curvature (1+2t) K(0, t): the flow is controlled
while it stays inside [-1 - alpha_tol, -1 + alpha_tol], and the control
time is the first exit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .solver import RadialGrid, RelativeConformalField, Trajectory, laplace_beltrami_radial

__all__ = [
    "CurvatureTrace",
    "ControlTime",
    "gauss_curvature",
    "rescaled_center_trace",
    "control_time",
]


def gauss_curvature(v: RelativeConformalField, grid: RadialGrid) -> np.ndarray:
    """K = e^{-2v} (-Lap_h v - 1) at every node; v = 0 gives exactly -1."""
    lap = laplace_beltrami_radial(v, grid)
    return np.exp(-2.0 * v.values) * (-lap - 1.0)


@dataclass(frozen=True)
class CurvatureTrace:
    """Center-curvature history of one run."""

    times: np.ndarray
    center_K: np.ndarray
    center_K_rescaled: np.ndarray
    pinch_margin: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if not (
            len(times) == len(self.center_K)
            == len(self.center_K_rescaled) == len(self.pinch_margin)
        ):
            raise ValueError("trace arrays must have equal length")
        if len(times) == 0:
            raise ValueError("trace must be nonempty")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("trace times must be strictly increasing")


def rescaled_center_trace(
    traj: Trajectory, grid: RadialGrid, alpha_tol: float
) -> CurvatureTrace:
    """(1+2t) K(0, t) along a trajectory plus the pinching margin.

    pinch_margin[i] = alpha_tol - |center_K_rescaled[i] + 1|; nonnegative
    margin means the rescaled curvature is still inside the band.
    """
    if not 0.0 < alpha_tol <= 1.0:
        raise DomainError(f"alpha_tol must lie in (0, 1], got {alpha_tol}")
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    times = traj.sample_times
    center_K = np.array(
        [float(gauss_curvature(s, grid)[0]) for s in traj.samples]
    )
    rescaled = (1.0 + 2.0 * times) * center_K
    margin = alpha_tol - np.abs(rescaled + 1.0)
    return CurvatureTrace(
        times=times,
        center_K=center_K,
        center_K_rescaled=rescaled,
        pinch_margin=margin,
    )


@dataclass(frozen=True)
class ControlTime:
    """First exit time of the rescaled center curvature, or a censored bound."""

    value: float
    censored: bool


def control_time(
    trace: CurvatureTrace, delta: float = 0.0, horizon: float | None = None
) -> ControlTime:
    """First time the pinch margin goes negative, linearly interpolated.

    Samples before the configured delay delta are ignored (the almost-
    hyperbolic setting only promises control from delta onward). If the
    margin never goes negative the result is censored at the horizon,
    a lower bound rather than a measurement.
    """
    if horizon is None:
        horizon = float(trace.times[-1])
    mask = trace.times >= delta
    times = trace.times[mask]
    margin = trace.pinch_margin[mask]
    if len(times) == 0:
        return ControlTime(value=horizon, censored=True)
    negative = np.nonzero(margin < 0.0)[0]
    if len(negative) == 0:
        return ControlTime(value=horizon, censored=True)
    k = int(negative[0])
    if k == 0:
        return ControlTime(value=float(times[0]), censored=False)
    t0, t1 = times[k - 1], times[k]
    m0, m1 = margin[k - 1], margin[k]
    crossing = t0 + (t1 - t0) * m0 / (m0 - m1)
    return ControlTime(value=float(crossing), censored=False)
