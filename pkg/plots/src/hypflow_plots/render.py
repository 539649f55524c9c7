"""Figure rendering.

Two figure kinds: 'trace' draws the rescaled center curvature against time
with the tolerance band, 'sweep' draws control time against ball radius
with the fitted exponential. Inputs are never modified; rendering twice
overwrites the output with an identical-dimension image.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import load_record, load_sweep_csv

FIGSIZE = (7.0, 4.5)
DPI = 130

KINDS = ("trace", "sweep")


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple
    output: Path
    kind: str
    log_y: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        if not self.inputs:
            raise ValueError("need at least one input file")
        for p in self.inputs:
            if not p.exists():
                raise FileNotFoundError(p)


def _render_trace(spec: FigureSpec, ax):
    alpha_tol = None
    for path in spec.inputs:
        record = load_record(path)
        alpha_tol = record["scenario"]["alpha_tol"]
        times = np.asarray(record["times"])
        values = np.asarray(record["center_K_rescaled"])
        if spec.log_y:
            values = -values
        ax.plot(times, values, lw=1.2, label=record["scenario"]["name"])
    sign = -1.0 if spec.log_y else 1.0
    for offset, style in ((-1.0 - alpha_tol, "--"), (-1.0 + alpha_tol, "--"), (-1.0, ":")):
        ax.axhline(sign * offset, color="k", ls=style, lw=0.8)
    if spec.log_y:
        ax.set_yscale("log")
        ax.set_ylabel("-(1+2t) K(0, t)")
    else:
        ax.set_ylabel("(1+2t) K(0, t)")
    ax.set_xlabel("t")
    ax.set_title("rescaled center curvature")
    if len(spec.inputs) <= 8:
        ax.legend(fontsize=7)


def _render_sweep(spec: FigureSpec, ax):
    data = load_sweep_csv(spec.inputs[0])
    R = np.asarray(data.radii)
    T = np.asarray(data.control_times)
    censored = np.asarray(data.censored)
    finite = ~censored
    ax.plot(R[finite], T[finite], "o", ms=6, color="C0", label="measured")
    if censored.any():
        ax.plot(R[censored], T[censored], "^", ms=7, mfc="none", color="C3",
                label="censored (lower bound)")
    slope, intercept = data.fit["slope"], data.fit["intercept"]
    grid = np.linspace(R.min(), R.max(), 200)
    ax.plot(grid, np.exp(intercept + slope * grid), "-", color="C1", lw=1.0,
            label=f"fit: slope {slope:.3f}")
    ax.annotate(f"$r^2$ = {data.fit['r_squared']:.4f}", xy=(0.05, 0.9),
                xycoords="axes fraction")
    # control times span orders of magnitude; the sweep is always log scale
    ax.set_yscale("log")
    ax.set_xlabel("R")
    ax.set_ylabel("control time")
    ax.set_title("control time vs ball radius")
    ax.legend(fontsize=8)


def render(spec: FigureSpec) -> Path:
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        if spec.kind == "trace":
            _render_trace(spec, ax)
        else:
            _render_sweep(spec, ax)
        fig.tight_layout()
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output
