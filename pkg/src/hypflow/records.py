"""Persistent machine-readable results.

One JSON document per run (schema_version 1), a JSON manifest listing what
a command produced, and the sweep CSV with its fit trailer. Array entries
are written with 12 significant digits. Payloads are deterministic for a
fixed (scenario, grid, seed) apart from wall-clock fields, which
canonical_payload() zeroes for byte-comparison.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from pathlib import Path

from .experiments import RunRecord, SweepResult

__all__ = [
    "SCHEMA_VERSION",
    "SWEEP_CSV_HEADER",
    "record_payload",
    "canonical_payload",
    "write_record",
    "load_record",
    "write_sweep_csv",
    "append_manifest",
    "load_manifest",
    "config_digest",
]

SCHEMA_VERSION = 1
SWEEP_CSV_HEADER = "R,control_time,censored,sandwich_violation,n_nodes,dr,wall_time_s"

_VOLATILE_META = ("wall_time",)


def _g12(x: float) -> float:
    """Round to 12 significant decimal digits."""
    return float(f"{float(x):.12g}")


def _array12(values) -> list[float]:
    return [_g12(v) for v in values]


def record_payload(record: RunRecord) -> dict:
    s = record.scenario
    meta = record.solver_meta
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": {
            "name": s.name,
            "R": s.R,
            "initial_kind": s.initial_kind,
            "horizon": s.horizon,
            "b": s.b,
            "eps": s.eps,
            "curvature_cap": s.curvature_cap,
            "seed": s.seed,
            "alpha_tol": s.alpha_tol,
            "delta": s.delta,
            "boundary": dataclasses.asdict(s.boundary),
        },
        "grid": {
            "R_dom": s.R,
            "n_nodes": int(meta["n_nodes"]),
            "dr": _g12(meta["dr"]),
        },
        "times": _array12(record.trace.times),
        "center_K": _array12(record.trace.center_K),
        "center_K_rescaled": _array12(record.trace.center_K_rescaled),
        "pinch_margin": _array12(record.trace.pinch_margin),
        "control_time": {
            "value": _g12(record.control_time.value),
            "censored": record.control_time.censored,
        },
        "sandwich_violation": _g12(record.sandwich_violation),
        "solver_meta": {
            "n_nodes": int(meta["n_nodes"]),
            "dr": _g12(meta["dr"]),
            "steps": int(meta["steps"]),
            "wall_time": float(meta["wall_time"]),
            "failed_at": meta.get("failed_at"),
        },
    }


def canonical_payload(payload: dict) -> dict:
    """Payload with wall-clock fields zeroed, for determinism comparisons."""
    out = json.loads(json.dumps(payload))
    for key in _VOLATILE_META:
        if key in out.get("solver_meta", {}):
            out["solver_meta"][key] = 0.0
    return out


def write_record(path, record: RunRecord) -> Path:
    path = Path(path)
    path.write_text(json.dumps(record_payload(record), indent=1) + "\n")
    return path


def load_record(path) -> dict:
    return json.loads(Path(path).read_text())


def write_sweep_csv(path, result: SweepResult) -> Path:
    """Data rows per radius, then three '#fit,' trailer rows."""
    lines = [SWEEP_CSV_HEADER]
    for rec in result.records:
        meta = rec.solver_meta
        lines.append(
            ",".join(
                [
                    f"{rec.scenario.R:.12g}",
                    f"{rec.control_time.value:.12g}",
                    "true" if rec.control_time.censored else "false",
                    f"{rec.sandwich_violation:.12g}",
                    str(int(meta["n_nodes"])),
                    f"{meta['dr']:.12g}",
                    f"{meta['wall_time']:.3f}",
                ]
            )
        )
    lines.append(f"#fit,slope,{result.slope:.12g}")
    lines.append(f"#fit,intercept,{result.intercept:.12g}")
    lines.append(f"#fit,r_squared,{result.r_squared:.12g}")
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def config_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def append_manifest(out_dir, digest: str, record_paths) -> Path:
    """Append one entry to manifest.json in out_dir."""
    out_dir = Path(out_dir)
    manifest_path = out_dir / "manifest.json"
    entries = load_manifest(out_dir) if manifest_path.exists() else []
    paths = [str(Path(p)) for p in record_paths]
    for p in paths:
        if not Path(p).exists():
            raise FileNotFoundError(f"manifest entry lists missing file {p}")
    entries.append(
        {
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "config_digest": digest,
            "records": paths,
            "schema_version": SCHEMA_VERSION,
        }
    )
    manifest_path.write_text(json.dumps(entries, indent=1) + "\n")
    return manifest_path


def load_manifest(out_dir) -> list:
    return json.loads((Path(out_dir) / "manifest.json").read_text())
