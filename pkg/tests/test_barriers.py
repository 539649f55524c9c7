import math

import numpy as np
import pytest

from hypflow.barriers import (
    BarrierParams,
    alpha_disc_of,
    barrier_profile,
    check_sandwich_conditions,
    compute_barrier_params,
    lower_barrier_value,
    mu_of,
    shrink_length,
    upper_barrier_value,
)
from hypflow.errors import DomainError
from hypflow.hyperbolic import DiscPoint, conformal_factor_of_abs

B_GRID = [0.01, 0.05, 0.1, 0.2, 0.35, 0.5]
EPS_GRID = [0.01, 0.05, 0.1, 0.15, 0.2]


class TestShrinkLength:
    def test_half_b(self):
        # 4 e^{0.5} < 12, so the max saturates at 12
        assert shrink_length(0.5, 0.05) == pytest.approx(26.0, abs=1e-12)

    def test_small_b(self):
        assert shrink_length(0.1, 0.05) == pytest.approx(122.0, abs=1e-12)

    def test_domain(self):
        for bad in (0.0, 0.6, -0.1):
            with pytest.raises(DomainError):
                shrink_length(bad, 0.05)
        with pytest.raises(DomainError):
            shrink_length(0.3, 0.0)


class TestDiscRadii:
    def test_alpha_limits(self):
        assert alpha_disc_of(1.0, 0.05) == pytest.approx(1.0, abs=1e-15)
        assert alpha_disc_of(0.0, 0.05) == 0.0

    def test_alpha_is_increasing_and_exceeds_j(self):
        js = np.linspace(0.05, 0.999, 100)
        alphas = np.array([alpha_disc_of(j, 0.05) for j in js])
        assert np.all(np.diff(alphas) > 0.0)
        assert np.all(alphas > js)
        assert np.all(alphas < 1.0)

    def test_params_orderings_hold_in_float(self):
        p = compute_barrier_params(0.5, 0.05)
        assert p.J == pytest.approx(26.0)
        assert p.j < p.j0 < 1.0
        assert p.j < p.alpha_disc < 1.0 < p.mu
        # derived lower bounds on j
        assert p.j >= max(1.0 - 0.25 * math.exp(-0.5), 1.0 - 0.5 / 6.0)
        assert 1.0 - math.exp(-0.5) < p.j ** 2

    def test_invalid_radii_rejected(self):
        with pytest.raises(DomainError):
            BarrierParams(b=0.2, eps=0.05, J=10.0, j=0.9, j0=0.95, alpha_disc=0.8, mu=1.1)


class TestBoundaryMatching:
    """The disc radii are defined exactly so that the barrier profiles meet
    the working band at |z| = j with the right offsets."""

    @pytest.mark.parametrize("eps", EPS_GRID)
    def test_upper_offset_synthetic_j(self, eps):
        j = 0.9
        alpha = alpha_disc_of(j, eps)
        gap = conformal_factor_of_abs(j / alpha) - conformal_factor_of_abs(j)
        assert gap == pytest.approx(4.0 * eps, rel=1e-12)

    @pytest.mark.parametrize("b", [0.1, 0.3, 0.5])
    def test_lower_offset_synthetic_j(self, b):
        eps = 0.05
        j = 0.9
        mu = mu_of(j, b, eps)
        gap = conformal_factor_of_abs(j / mu) - conformal_factor_of_abs(j)
        assert gap == pytest.approx(-4.0 * eps - eps / (1.0 - b), rel=1e-12)

    def test_offsets_at_true_radii(self):
        # near |z| = j the cancellation 1 - (j/c)^2 costs ~1e-6 of relative
        # precision, hence the loose tolerance
        p = compute_barrier_params(0.5, 0.05)
        z = DiscPoint(p.j, 0.0)
        phi_j = conformal_factor_of_abs(p.j)
        up = upper_barrier_value(z, 0.0, p)
        assert up - phi_j - 0.5 * math.log1p(p.b) == pytest.approx(0.2, abs=1e-5)
        low = lower_barrier_value(z, 0.0, p)
        expected = -4.0 * p.eps - p.eps / (1.0 - p.b) + 0.5 * math.log1p(-p.b)
        assert low - phi_j == pytest.approx(expected, abs=1e-5)


class TestBarrierValues:
    def test_center_values(self):
        p = compute_barrier_params(0.3, 0.05)
        origin = DiscPoint(0.0, 0.0)
        assert upper_barrier_value(origin, 0.0, p) == pytest.approx(
            math.log(2.0) + 0.5 * math.log1p(0.3), rel=1e-12
        )
        assert lower_barrier_value(origin, 0.0, p) == pytest.approx(
            math.log(2.0) + 0.5 * math.log1p(-0.3), rel=1e-12
        )

    def test_upper_increases_in_time(self):
        p = compute_barrier_params(0.3, 0.05)
        z = DiscPoint(0.5, 0.1)
        vals = [upper_barrier_value(z, t, p) for t in (0.0, 0.1, 0.5, 2.0)]
        assert np.all(np.diff(vals) > 0.0)

    def test_lower_linear_growth_bound(self):
        # log x <= x - 1 turns the time factor into a linear bound
        p = compute_barrier_params(0.2, 0.05)
        z = DiscPoint(0.6, 0.0)
        for t in (0.0, 0.03, 0.05, 0.2, 1.0):
            lhs = lower_barrier_value(z, t, p)
            rhs = lower_barrier_value(z, 0.0, p) + t / ((1.0 - p.b) * p.mu ** 2)
            assert lhs <= rhs + 1e-14

    def test_upper_domain_error(self):
        p = compute_barrier_params(0.5, 0.05)
        outside = DiscPoint(1.0 - 1e-12, 0.0)
        assert abs(outside) >= p.alpha_disc
        with pytest.raises(DomainError):
            upper_barrier_value(outside, 0.0, p)


class TestSandwich:
    @pytest.mark.parametrize("b", [0.1, 0.5])
    def test_margins_positive_at_defaults(self, b):
        up, low = check_sandwich_conditions(compute_barrier_params(b, 0.05))
        assert up > 0.0
        assert low > 0.0

    def test_margin_grid(self):
        worst = min(
            min(check_sandwich_conditions(compute_barrier_params(b, eps)))
            for b in B_GRID
            for eps in EPS_GRID
        )
        assert worst >= 0.0

    def test_origin_pinching_follows(self):
        # with both margins nonnegative, each barrier's origin ratio
        # e^{2(H - phi)} / (1+2t) stays inside [1-b, 1+b]
        origin = DiscPoint(0.0, 0.0)
        log2 = math.log(2.0)
        for b in B_GRID:
            for eps in EPS_GRID:
                p = compute_barrier_params(b, eps)
                for t in (0.0, 0.02, 0.1, 1.0, 10.0):
                    for value in (
                        upper_barrier_value(origin, t, p),
                        lower_barrier_value(origin, t, p),
                    ):
                        ratio = math.exp(2.0 * (value - log2)) / (1.0 + 2.0 * t)
                        assert 1.0 - b - 1e-12 <= ratio <= 1.0 + b + 1e-12


class TestProfiles:
    def test_band_ordering_at_time_zero(self):
        # any field inside the initial band sits between the two barriers
        p = compute_barrier_params(0.5, 0.05)
        rho = np.linspace(0.0, 0.99, 500)
        upper = barrier_profile(rho, 0.0, p, "upper")
        lower = barrier_profile(rho, 0.0, p, "lower")
        assert np.all(upper >= 0.5 * math.log1p(p.b) - 1e-12)
        assert np.all(lower <= 0.5 * math.log1p(-p.b) + 1e-12)

    def test_profile_matches_pointwise_values(self):
        p = compute_barrier_params(0.4, 0.08)
        rho = np.array([0.0, 0.3, 0.7])
        prof = barrier_profile(rho, 0.13, p, "upper")
        for k, r in enumerate(rho):
            direct = upper_barrier_value(DiscPoint(float(r), 0.0), 0.13, p)
            assert prof[k] + conformal_factor_of_abs(r) == pytest.approx(direct, rel=1e-12)

    def test_profile_domain_check(self):
        p = compute_barrier_params(0.5, 0.05)
        with pytest.raises(DomainError):
            barrier_profile(np.array([0.5, 1.0]), 0.0, p, "upper")
