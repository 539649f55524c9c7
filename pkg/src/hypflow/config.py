"""Line-oriented configuration files.

The grammar is INI: ``[section]`` headers over ``key = value`` lines,
parsed with the standard library. Sections are ``[grid]``, one
``[scenario NAME]`` per run, and an optional ``[sweep]``. See the README
for the full key list. Parsing fills defaults eagerly, so serializing a
parsed config and re-parsing it yields an identical structure.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .experiments import INITIAL_KINDS, Scenario
from .solver import BOUNDARY_KINDS, BoundaryScenario

__all__ = ["ConfigError", "GridSection", "SweepSection", "Config",
           "parse_config", "config_to_text", "load_config_file"]


class ConfigError(ValueError):
    """The configuration is unreadable or violates the grammar."""


_SCENARIO_REQUIRED = ("initial", "R", "horizon")

_SCENARIO_DEFAULTS = {
    "b": 0.1,
    "eps": 0.05,
    "curvature_cap": 2.0,
    "seed": 0,
    "alpha_tol": 0.5,
    "delta": 0.0,
    "boundary": "hyperbolic_continuation",
    "amplitude": 0.0,
    "period": 1.0,
    "rate_scale": 1.0,
}


@dataclass(frozen=True)
class GridSection:
    dr: float = 0.02


@dataclass(frozen=True)
class SweepSection:
    template: str
    radii: tuple
    horizon: float | None = None
    jobs: int = 1


@dataclass(frozen=True)
class Config:
    grid: GridSection
    scenarios: tuple
    sweep: SweepSection | None = None


def _get_float(section, name, key) -> float:
    raw = section[key]
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"section '{name}': key '{key}' is not a number: {raw!r}") from exc


def _parse_scenario(name: str, section) -> Scenario:
    for key in _SCENARIO_REQUIRED:
        if key not in section:
            raise ConfigError(f"scenario '{name}' is missing required key '{key}'")
    merged = dict(_SCENARIO_DEFAULTS)
    merged.update(section)
    kind = merged["initial"]
    if kind not in INITIAL_KINDS:
        raise ConfigError(f"scenario '{name}': unknown initial kind {kind!r}")
    bkind = merged["boundary"]
    if bkind not in BOUNDARY_KINDS:
        raise ConfigError(f"scenario '{name}': unknown boundary kind {bkind!r}")
    boundary = BoundaryScenario(
        kind=bkind,
        amplitude=_get_float(merged, name, "amplitude"),
        period=_get_float(merged, name, "period"),
        rate_scale=_get_float(merged, name, "rate_scale"),
    )
    return Scenario(
        name=name,
        R=_get_float(merged, name, "R"),
        initial_kind=kind,
        horizon=_get_float(merged, name, "horizon"),
        boundary=boundary,
        b=_get_float(merged, name, "b"),
        eps=_get_float(merged, name, "eps"),
        curvature_cap=_get_float(merged, name, "curvature_cap"),
        seed=int(merged["seed"]),
        alpha_tol=_get_float(merged, name, "alpha_tol"),
        delta=_get_float(merged, name, "delta"),
    )


def parse_config(text: str) -> Config:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep key case: R and dr are distinct names
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config is not parseable: {exc}") from exc

    grid = GridSection()
    if parser.has_section("grid"):
        grid = GridSection(dr=_get_float(parser["grid"], "grid", "dr"))

    scenarios = []
    for section in parser.sections():
        if section.startswith("scenario "):
            name = section[len("scenario "):].strip()
            if not name:
                raise ConfigError("scenario section needs a name: [scenario NAME]")
            scenarios.append(_parse_scenario(name, parser[section]))

    sweep = None
    if parser.has_section("sweep"):
        sec = parser["sweep"]
        for key in ("template", "radii"):
            if key not in sec:
                raise ConfigError(f"sweep section is missing required key '{key}'")
        radii = tuple(float(tok) for tok in sec["radii"].replace(",", " ").split())
        if not radii:
            raise ConfigError("sweep radii list is empty")
        horizon = float(sec["horizon"]) if "horizon" in sec else None
        jobs = int(sec["jobs"]) if "jobs" in sec else 1
        sweep = SweepSection(template=sec["template"], radii=radii,
                             horizon=horizon, jobs=jobs)
        if all(s.name != sweep.template for s in scenarios):
            raise ConfigError(
                f"sweep template '{sweep.template}' does not match any scenario section"
            )

    return Config(grid=grid, scenarios=tuple(scenarios), sweep=sweep)


def config_to_text(config: Config) -> str:
    """Serialize a config; parse(config_to_text(c)) == c."""
    lines = ["[grid]", f"dr = {config.grid.dr!r}", ""]
    for s in config.scenarios:
        lines.append(f"[scenario {s.name}]")
        lines.append(f"initial = {s.initial_kind}")
        lines.append(f"R = {s.R!r}")
        lines.append(f"horizon = {s.horizon!r}")
        lines.append(f"b = {s.b!r}")
        lines.append(f"eps = {s.eps!r}")
        lines.append(f"curvature_cap = {s.curvature_cap!r}")
        lines.append(f"seed = {s.seed}")
        lines.append(f"alpha_tol = {s.alpha_tol!r}")
        lines.append(f"delta = {s.delta!r}")
        lines.append(f"boundary = {s.boundary.kind}")
        lines.append(f"amplitude = {s.boundary.amplitude!r}")
        lines.append(f"period = {s.boundary.period!r}")
        lines.append(f"rate_scale = {s.boundary.rate_scale!r}")
        lines.append("")
    if config.sweep is not None:
        lines.append("[sweep]")
        lines.append(f"template = {config.sweep.template}")
        lines.append("radii = " + " ".join(repr(r) for r in config.sweep.radii))
        if config.sweep.horizon is not None:
            lines.append(f"horizon = {config.sweep.horizon!r}")
        lines.append(f"jobs = {config.sweep.jobs}")
        lines.append("")
    return "\n".join(lines)


def load_config_file(path) -> tuple[Config, bytes]:
    """Read a config file; returns the parsed config and the raw bytes."""
    try:
        raw = open(path, "rb").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(raw.decode("utf-8")), raw
