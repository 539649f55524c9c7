import math

import numpy as np
import pytest

from hypflow.curvature import (
    ControlTime,
    CurvatureTrace,
    control_time,
    gauss_curvature,
    rescaled_center_trace,
)
from hypflow.errors import DomainError
from hypflow.solver import (
    BoundaryScenario,
    RadialGrid,
    RelativeConformalField,
    Trajectory,
    evolve,
)

GRID = RadialGrid(3.0, 151)


def const_field(value, t=0.0, grid=GRID):
    return RelativeConformalField(np.full(grid.n_nodes, value), t)


class TestGaussCurvature:
    def test_hyperbolic_background(self):
        K = gauss_curvature(const_field(0.0), GRID)
        assert np.max(np.abs(K + 1.0)) == 0.0

    def test_hyperbolic_flow_levels(self):
        for t in (0.1, 0.7, 3.0):
            K = gauss_curvature(const_field(0.5 * math.log1p(2 * t), t), GRID)
            assert np.max(np.abs(K + 1.0 / (1.0 + 2.0 * t))) <= 1e-14

    def test_constant_shift_scales_curvature(self):
        c = 0.31
        K = gauss_curvature(const_field(c), GRID)
        assert np.max(np.abs(K + math.exp(-2.0 * c))) <= 1e-14

    def test_scaling_covariance(self):
        rng = np.random.default_rng(2)
        v = 0.2 * np.sin(1.3 * GRID.r) + 0.1 * np.cos(2.1 * GRID.r)
        for lam in rng.uniform(0.2, 5.0, size=20):
            K1 = gauss_curvature(RelativeConformalField(v, 0.0), GRID)
            K2 = gauss_curvature(RelativeConformalField(v + 0.5 * math.log(lam), 0.0), GRID)
            assert np.max(np.abs(K2 - K1 / lam)) <= 1e-10


def hyperbolic_trajectory(times, grid=GRID):
    samples = [const_field(0.5 * math.log1p(2 * t), t, grid) for t in times]
    return Trajectory(samples=samples, sample_times=np.asarray(times), horizon=times[-1])


class TestTrace:
    def test_hyperbolic_flow_trace(self):
        traj = hyperbolic_trajectory(np.linspace(0.0, 2.0, 9))
        trace = rescaled_center_trace(traj, GRID, alpha_tol=0.3)
        assert np.max(np.abs(trace.center_K_rescaled + 1.0)) <= 1e-13
        assert np.max(np.abs(trace.pinch_margin - 0.3)) <= 1e-13

    def test_frozen_shifted_level(self):
        b = 0.2
        traj = Trajectory(
            samples=(const_field(0.5 * math.log1p(-b)),),
            sample_times=np.array([0.0]),
            horizon=1.0,
        )
        trace = rescaled_center_trace(traj, GRID, alpha_tol=0.5)
        assert trace.center_K_rescaled[0] == pytest.approx(-1.0 / (1.0 - b), rel=1e-13)
        assert trace.pinch_margin[0] == pytest.approx(0.5 - (1.0 / (1.0 - b) - 1.0), rel=1e-12)

    def test_alpha_tol_domain(self):
        traj = hyperbolic_trajectory(np.array([0.0, 1.0]))
        with pytest.raises(DomainError):
            rescaled_center_trace(traj, GRID, alpha_tol=0.0)

    def test_trace_validation(self):
        with pytest.raises(ValueError):
            CurvatureTrace(
                times=np.array([0.0, 0.0]),
                center_K=np.zeros(2),
                center_K_rescaled=np.zeros(2),
                pinch_margin=np.zeros(2),
            )


def synthetic_trace(times, margins, alpha_tol=0.5):
    times = np.asarray(times, dtype=float)
    margins = np.asarray(margins, dtype=float)
    rescaled = -1.0 + (alpha_tol - margins)
    return CurvatureTrace(
        times=times,
        center_K=rescaled / (1.0 + 2.0 * times),
        center_K_rescaled=rescaled,
        pinch_margin=margins,
    )


class TestControlTime:
    def test_censored_when_margin_stays_positive(self):
        trace = synthetic_trace([0.0, 1.0, 2.0], [0.5, 0.4, 0.1])
        ct = control_time(trace, horizon=2.0)
        assert ct == ControlTime(value=2.0, censored=True)

    def test_linear_interpolation(self):
        trace = synthetic_trace([0.0, 2.0, 3.0], [0.5, 0.2, -0.2])
        ct = control_time(trace)
        assert not ct.censored
        assert ct.value == pytest.approx(2.5)

    def test_delay_ignores_early_samples(self):
        trace = synthetic_trace([0.0, 0.005, 0.02, 0.05], [0.1, -0.2, 0.3, 0.2])
        assert not control_time(trace).censored
        delayed = control_time(trace, delta=0.01, horizon=0.05)
        assert delayed.censored and delayed.value == 0.05

    def test_cadence_invariance_on_simulation(self):
        grid = RadialGrid(2.0, 81)
        boundary = BoundaryScenario("adversarial_oscillation", amplitude=0.5, period=1.0)
        initial = RelativeConformalField(np.zeros(81), 0.0)

        def measure(cadence):
            traj = evolve(initial, grid, boundary, t_end=8.0, sample_every=cadence)
            trace = rescaled_center_trace(traj, grid, alpha_tol=0.5)
            return control_time(trace, horizon=8.0)

        coarse, fine = measure(0.2), measure(0.1)
        assert not coarse.censored and not fine.censored
        assert abs(coarse.value - fine.value) <= 0.2
