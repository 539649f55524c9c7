"""Readers for the public hypflow output formats.

Only the documented JSON record schema (schema_version 1) and the sweep
CSV (header row, data rows, '#fit,' trailer rows) are consumed; there is
no import-level coupling to the simulation package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

SCHEMA_VERSION = 1
SWEEP_HEADER = "R,control_time,censored,sandwich_violation,n_nodes,dr,wall_time_s"

_RECORD_FIELDS = (
    "schema_version",
    "scenario",
    "times",
    "center_K_rescaled",
    "pinch_margin",
    "control_time",
)


class RecordSchemaError(ValueError):
    """Input does not match the expected schema; carries the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"field '{field}': {message}")


def load_record(path) -> dict:
    payload = json.loads(Path(path).read_text())
    for field in _RECORD_FIELDS:
        if field not in payload:
            raise RecordSchemaError(field, "missing from record")
    version = payload["schema_version"]
    if version != SCHEMA_VERSION:
        raise RecordSchemaError(
            "schema_version", f"expected {SCHEMA_VERSION}, got {version}"
        )
    if "alpha_tol" not in payload["scenario"]:
        raise RecordSchemaError("scenario.alpha_tol", "missing from record")
    return payload


@dataclass(frozen=True)
class SweepData:
    radii: list
    control_times: list
    censored: list
    fit: dict


def load_sweep_csv(path) -> SweepData:
    lines = [ln for ln in Path(path).read_text().strip().splitlines() if ln]
    if not lines or lines[0] != SWEEP_HEADER:
        raise RecordSchemaError("header", f"expected {SWEEP_HEADER!r}")
    radii, times, censored, fit = [], [], [], {}
    for line in lines[1:]:
        if line.startswith("#fit,"):
            _, key, value = line.split(",", 2)
            fit[key] = float(value)
            continue
        cols = line.split(",")
        if len(cols) != 7:
            raise RecordSchemaError("row", f"expected 7 columns, got {len(cols)}")
        radii.append(float(cols[0]))
        times.append(float(cols[1]))
        censored.append(cols[2].strip().lower() == "true")
    if not radii:
        raise RecordSchemaError("rows", "sweep CSV contains no data rows")
    for key in ("slope", "intercept", "r_squared"):
        if key not in fit:
            raise RecordSchemaError(f"#fit,{key}", "missing trailer row")
    return SweepData(radii=radii, control_times=times, censored=censored, fit=fit)
