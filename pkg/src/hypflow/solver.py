"""Radial solver for the conformal Ricci flow on the Poincare disc.

Writing the evolving metric as g = e^{2v} h against the hyperbolic
background h, the flow reduces to the scalar quasilinear equation

    dv/dt = e^{-2v} (Lap_h v + 1),

which for rotationally symmetric data in geodesic polar coordinates reads
Lap_h v = v_rr + coth(r) v_r. The scheme is explicit Euler with
second-order central differences, CFL-limited so that single steps are
monotone (order-preserving); that gives the discrete comparison principle
for free. The domain is truncated at r = R_dom and the outermost node is
driven by a boundary scenario standing in for whatever the flow does
outside the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import CFLError, DomainError

__all__ = [
    "RadialGrid",
    "RelativeConformalField",
    "BoundaryScenario",
    "Trajectory",
    "laplace_beltrami_radial",
    "cfl_limit",
    "step",
    "evolve",
    "residual_norm",
    "BOUNDARY_KINDS",
    "DEFAULT_CFL_SAFETY",
    "DEFAULT_BLOWUP_CAP",
]

BOUNDARY_KINDS = ("frozen", "hyperbolic_continuation", "adversarial_oscillation")

# The origin stencil carries twice the interior weight, so order preservation
# needs sigma <= 1/2; 0.45 leaves margin for the nonlinear reaction term.
DEFAULT_CFL_SAFETY = 0.45
DEFAULT_BLOWUP_CAP = 50.0


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid on the geodesic-radius interval [0, R_dom]."""

    R_dom: float
    n_nodes: int

    def __post_init__(self):
        if self.R_dom <= 0.0:
            raise DomainError(f"R_dom must be positive, got {self.R_dom}")
        if self.n_nodes < 8:
            raise DomainError(f"need at least 8 nodes, got {self.n_nodes}")

    @property
    def dr(self) -> float:
        return self.R_dom / (self.n_nodes - 1)

    @cached_property
    def r(self) -> np.ndarray:
        nodes = np.arange(self.n_nodes) * self.dr
        nodes.setflags(write=False)
        return nodes

    @cached_property
    def coth(self) -> np.ndarray:
        # coth(r_i) for i >= 1; the origin entry is a placeholder, the
        # regularized stencil there never reads it.
        table = np.empty(self.n_nodes)
        table[0] = 0.0
        table[1:] = 1.0 / np.tanh(self.r[1:])
        table.setflags(write=False)
        return table


@dataclass(frozen=True)
class RelativeConformalField:
    """Scalar v with g = e^{2v} h on a RadialGrid at one time instant.

    The absolute conformal factor u = v + phi is recoverable; v is the
    quantity that stays O(1) out to large radii.
    """

    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("field values must be a 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        if self.time < 0.0:
            raise ValueError(f"time must be nonnegative, got {self.time}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def absolute_values(self, grid: RadialGrid) -> np.ndarray:
        """u = v + phi along the grid."""
        from .hyperbolic import conformal_factor_of_abs

        return self.values + conformal_factor_of_abs(np.tanh(grid.r / 2.0))


@dataclass(frozen=True)
class BoundaryScenario:
    """Dirichlet driver for the outermost node.

    frozen: hold the initial boundary value.
    hyperbolic_continuation: follow v_b(0) + (1/2) log(1 + 2t/rate_scale),
        the exact continuation of a (scaled) hyperbolic flow; rate_scale=1
        is the plain hyperbolic flow, barrier flows use their own scale.
    adversarial_oscillation: v_b(0) + amplitude * sin(2 pi t / period),
        a boundary that refuses to follow the flow at all.
    """

    kind: str
    amplitude: float = 0.0
    period: float = 1.0
    rate_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in BOUNDARY_KINDS:
            raise DomainError(f"unknown boundary kind {self.kind!r}")
        if self.amplitude < 0.0:
            raise DomainError("amplitude must be nonnegative")
        if self.kind == "adversarial_oscillation" and self.period <= 0.0:
            raise DomainError("oscillation period must be positive")
        if self.rate_scale <= 0.0:
            raise DomainError("rate_scale must be positive")

    def resolve_base(self, boundary_value: float, t: float) -> float:
        """Base value such that the scenario reproduces boundary_value at time t."""
        code = _kernels.boundary_kind_code(self.kind)
        offset = _kernels.boundary_value(
            code, 0.0, self.amplitude, self.period, self.rate_scale, t
        )
        return boundary_value - offset

    def value_at(self, base: float, t: float) -> float:
        code = _kernels.boundary_kind_code(self.kind)
        return _kernels.boundary_value(
            code, base, self.amplitude, self.period, self.rate_scale, t
        )


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered samples of one evolution."""

    samples: tuple
    sample_times: np.ndarray
    horizon: float
    steps: int = 0
    failed_at: float | None = None

    def __post_init__(self):
        times = np.array(self.sample_times, dtype=float)
        times.setflags(write=False)
        object.__setattr__(self, "sample_times", times)
        object.__setattr__(self, "samples", tuple(self.samples))
        if len(self.samples) != len(times):
            raise ValueError("samples and sample_times must have equal length")
        if len(times) == 0:
            raise ValueError("trajectory must contain at least one sample")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def final(self) -> RelativeConformalField:
        return self.samples[-1]


def _check_pair(values: np.ndarray, grid: RadialGrid):
    if values.shape[0] != grid.n_nodes:
        raise ValueError(
            f"field has {values.shape[0]} values but grid has {grid.n_nodes} nodes"
        )


def laplace_beltrami_radial(v: RelativeConformalField, grid: RadialGrid) -> np.ndarray:
    """Discrete Lap_h v = v_rr + coth(r) v_r on every node.

    Interior nodes use second-order central differences. The origin uses
    the regularized value 2 v_rr with a symmetric ghost node. The boundary
    node is filled with one-sided second-order differences; the stepper
    never reads it (Dirichlet), the curvature observer does.
    """
    vals = v.values
    _check_pair(vals, grid)
    if grid.n_nodes < 3:
        raise ValueError("need at least 3 nodes for the stencil")
    dr = grid.dr
    dr2 = dr * dr
    coth = grid.coth
    out = np.empty_like(vals)
    out[0] = 4.0 * (vals[1] - vals[0]) / dr2
    out[1:-1] = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / dr2 \
        + coth[1:-1] * (vals[2:] - vals[:-2]) / (2.0 * dr)
    # one-sided stencils in difference form, exact on constant fields
    d1 = (3.0 * (vals[-1] - vals[-2]) + (vals[-3] - vals[-2])) / (2.0 * dr)
    d2 = (2.0 * (vals[-1] - vals[-2]) - 3.0 * (vals[-2] - vals[-3])
          + (vals[-3] - vals[-4])) / dr2
    out[-1] = d2 + coth[-1] * d1
    return out


def cfl_limit(state: RelativeConformalField, grid: RadialGrid) -> float:
    """Largest admissible explicit step, dr^2 e^{2 min(v)} / 2."""
    _check_pair(state.values, grid)
    return 0.5 * grid.dr ** 2 * math.exp(2.0 * float(state.values.min()))


def step(
    state: RelativeConformalField,
    dt: float,
    grid: RadialGrid,
    boundary: BoundaryScenario,
) -> RelativeConformalField:
    """One explicit Euler step; refuses steps beyond the CFL limit.

    The interior is updated from the old field; the boundary node is
    overwritten with the scenario value at the new time. Under the CFL
    precondition the update is monotone: ordered states with ordered
    boundaries stay ordered.
    """
    _check_pair(state.values, grid)
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    admissible = cfl_limit(state, grid)
    if dt > admissible:
        raise CFLError(dt, admissible)
    v = state.values.copy()
    base = boundary.resolve_base(float(v[-1]), state.time)
    code = _kernels.boundary_kind_code(boundary.kind)
    # sigma=1 makes the kernel's internal step at least dt, so a single
    # step lands on the target time
    t, _, _ = _kernels.advance(
        v, state.time, state.time + dt, grid.dr, grid.coth, 1.0, code, base,
        boundary.amplitude, boundary.period, boundary.rate_scale, math.inf,
    )
    return RelativeConformalField(v, t)


def evolve(
    initial: RelativeConformalField,
    grid: RadialGrid,
    boundary: BoundaryScenario,
    t_end: float,
    sample_every: float,
    *,
    cfl_safety: float = DEFAULT_CFL_SAFETY,
    blowup_cap: float = DEFAULT_BLOWUP_CAP,
) -> Trajectory:
    """Integrate from initial.time to t_end with automatic CFL steps.

    Samples are recorded at the requested cadence plus the initial and
    final times. If |v| exceeds blowup_cap the integration aborts and the
    partial trajectory is returned with failed_at set.
    """
    _check_pair(initial.values, grid)
    t0 = initial.time
    if t_end <= t0:
        raise ValueError(f"t_end={t_end} must exceed the initial time {t0}")
    if sample_every <= 0.0:
        raise ValueError("sample_every must be positive")
    if not 0.0 < cfl_safety <= 1.0:
        raise ValueError("cfl_safety must lie in (0, 1]")

    v = initial.values.copy()
    base = boundary.resolve_base(float(v[-1]), t0)
    code = _kernels.boundary_kind_code(boundary.kind)

    samples = [RelativeConformalField(v.copy(), t0)]
    times = [t0]
    steps_total = 0
    failed: float | None = None
    t = t0
    k = 1
    while t < t_end:
        target = min(t0 + k * sample_every, t_end)
        k += 1
        if target <= t:
            continue
        t, n_steps, failed_at = _kernels.advance(
            v, t, target, grid.dr, grid.coth, cfl_safety, code, base,
            boundary.amplitude, boundary.period, boundary.rate_scale, blowup_cap,
        )
        steps_total += int(n_steps)
        if not math.isnan(failed_at):
            failed = float(failed_at)
            if np.all(np.isfinite(v)):
                samples.append(RelativeConformalField(v.copy(), t))
                times.append(t)
            break
        samples.append(RelativeConformalField(v.copy(), t))
        times.append(t)
    return Trajectory(
        samples=tuple(samples),
        sample_times=np.array(times),
        horizon=t_end,
        steps=steps_total,
        failed_at=failed,
    )


def residual_norm(trajectory: Trajectory, grid: RadialGrid) -> float:
    """Sup over interior samples of |dv/dt - e^{-2v} (Lap_h v + 1)|.

    The time derivative is the second-order three-point formula on the
    (possibly nonuniform) sample times; only interior nodes enter, the
    boundary node is scenario-driven. Converges like O(dr^2 + cadence^2)
    on smooth exact solutions.
    """
    if len(trajectory) < 3:
        raise ValueError("need at least 3 samples to form a time derivative")
    times = trajectory.sample_times
    worst = 0.0
    for k in range(1, len(trajectory) - 1):
        ha = times[k] - times[k - 1]
        hb = times[k + 1] - times[k]
        va = trajectory.samples[k - 1].values
        vk = trajectory.samples[k].values
        vb = trajectory.samples[k + 1].values
        dvdt = (vb * ha * ha - va * hb * hb + vk * (hb * hb - ha * ha)) \
            / (ha * hb * (ha + hb))
        lap = laplace_beltrami_radial(trajectory.samples[k], grid)
        rhs = np.exp(-2.0 * vk) * (lap + 1.0)
        worst = max(worst, float(np.max(np.abs(dvdt[1:-1] - rhs[1:-1]))))
    return worst
