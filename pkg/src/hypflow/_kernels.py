"""Time-stepping kernels.

The inner loop (explicit Euler on dv/dt = e^{-2v} (Lap_h v + 1) with a
CFL step recomputed from min(v) every iteration) dominates runtime, so it
is compiled with numba. A pure-numpy implementation of the same loop is
kept as a fallback; set HYPFLOW_KERNEL=numpy to force it, HYPFLOW_KERNEL=numba
to require the jitted path. benchmarks/kernel_bench.py compares the two.
"""

import math
import os

import numpy as np

BOUNDARY_FROZEN = 0
BOUNDARY_CONTINUATION = 1
BOUNDARY_OSCILLATION = 2

_KIND_CODES = {
    "frozen": BOUNDARY_FROZEN,
    "hyperbolic_continuation": BOUNDARY_CONTINUATION,
    "adversarial_oscillation": BOUNDARY_OSCILLATION,
}


def boundary_kind_code(kind: str) -> int:
    return _KIND_CODES[kind]


def boundary_value(kind_code, base, amplitude, period, rate_scale, t):
    """Dirichlet value driven at the outermost node at time t."""
    if kind_code == BOUNDARY_FROZEN:
        return base
    if kind_code == BOUNDARY_CONTINUATION:
        return base + 0.5 * math.log1p(2.0 * t / rate_scale)
    return base + amplitude * math.sin(2.0 * math.pi * t / period)


def _advance_numpy(v, t0, t_target, dr, coth, sigma, kind_code, base,
                   amplitude, period, rate_scale, blowup_cap):
    """Advance v in place from t0 to t_target; returns (t, steps, failed_at).

    failed_at is nan unless the blow-up cap was hit, in which case the loop
    stops and failed_at is the time of the offending state.
    """
    n = v.shape[0]
    dr2 = dr * dr
    coth_i = coth[1:-1]
    t = t0
    steps = 0
    failed_at = math.nan
    while t < t_target:
        dt_raw = 0.5 * sigma * dr2 * math.exp(2.0 * v.min())
        remaining = t_target - t
        if dt_raw >= remaining:
            dt = remaining
            t_new = t_target
        else:
            dt = dt_raw
            t_new = t + dt
        lap0 = 4.0 * (v[1] - v[0]) / dr2
        origin = v[0] + dt * math.exp(-2.0 * v[0]) * (lap0 + 1.0)
        lap = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / dr2 \
            + coth_i * (v[2:] - v[:-2]) / (2.0 * dr)
        interior = v[1:-1] + dt * np.exp(-2.0 * v[1:-1]) * (lap + 1.0)
        v[0] = origin
        v[1:-1] = interior
        v[n - 1] = boundary_value(kind_code, base, amplitude, period, rate_scale, t_new)
        t = t_new
        steps += 1
        worst = np.max(np.abs(v))
        if not math.isfinite(worst) or worst > blowup_cap:
            failed_at = t
            break
    return t, steps, failed_at


def _advance_loop(v, t0, t_target, dr, coth, sigma, kind_code, base,
                  amplitude, period, rate_scale, blowup_cap):
    n = v.shape[0]
    dr2 = dr * dr
    new = np.empty(n)
    t = t0
    steps = 0
    failed_at = np.nan
    while t < t_target:
        vmin = v[0]
        for i in range(1, n):
            if v[i] < vmin:
                vmin = v[i]
        dt_raw = 0.5 * sigma * dr2 * np.exp(2.0 * vmin)
        remaining = t_target - t
        if dt_raw >= remaining:
            dt = remaining
            t_new = t_target
        else:
            dt = dt_raw
            t_new = t + dt
        lap0 = 4.0 * (v[1] - v[0]) / dr2
        new[0] = v[0] + dt * np.exp(-2.0 * v[0]) * (lap0 + 1.0)
        for i in range(1, n - 1):
            lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / dr2 \
                + coth[i] * (v[i + 1] - v[i - 1]) / (2.0 * dr)
            new[i] = v[i] + dt * np.exp(-2.0 * v[i]) * (lap + 1.0)
        if kind_code == BOUNDARY_FROZEN:
            new[n - 1] = base
        elif kind_code == BOUNDARY_CONTINUATION:
            new[n - 1] = base + 0.5 * np.log1p(2.0 * t_new / rate_scale)
        else:
            new[n - 1] = base + amplitude * np.sin(2.0 * np.pi * t_new / period)
        for i in range(n):
            v[i] = new[i]
        t = t_new
        steps += 1
        worst = 0.0
        bad = False
        for i in range(n):
            a = abs(v[i])
            if not np.isfinite(a):
                bad = True
                break
            if a > worst:
                worst = a
        if bad or worst > blowup_cap:
            failed_at = t
            break
    return t, steps, failed_at


def _select_backend():
    choice = os.environ.get("HYPFLOW_KERNEL", "").strip().lower()
    if choice == "numpy":
        return _advance_numpy, "numpy"
    try:
        from numba import njit
    except ImportError:
        if choice == "numba":
            raise
        return _advance_numpy, "numpy"
    jitted = njit(cache=True)(_advance_loop)
    return jitted, "numba"


advance, BACKEND = _select_backend()

# exported for the benchmark, which times both paths regardless of BACKEND
advance_numpy = _advance_numpy


def advance_numba():
    """Return the jitted kernel, compiling on first use (benchmark helper)."""
    from numba import njit

    return njit(cache=True)(_advance_loop)
