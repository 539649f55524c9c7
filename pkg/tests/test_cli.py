import json
import subprocess
import sys
from pathlib import Path

import pytest

from hypflow.records import canonical_payload, load_manifest, load_record


def run_cli(*args, env=None):
    import os

    merged = dict(os.environ)
    if env:
        merged.update(env)
    return subprocess.run(
        [sys.executable, "-m", "hypflow.cli", *args],
        capture_output=True,
        text=True,
        env=merged,
    )


RUN_CONFIG = """
[grid]
dr = 0.05

[scenario ball]
initial = exact_hyperbolic
R = 2
horizon = 0.05
seed = 1
"""

BLOWUP_CONFIG = """
[grid]
dr = 0.05

[scenario explode]
initial = exact_hyperbolic
R = 2
horizon = 1.0
boundary = adversarial_oscillation
amplitude = 200.0
period = 0.001
"""

SWEEP_CONFIG = """
[grid]
dr = 0.05

[scenario probe]
initial = exact_hyperbolic
R = 3
horizon = 100
boundary = adversarial_oscillation
amplitude = 0.5
period = 1.0
alpha_tol = 0.5

[sweep]
template = probe
radii = 2 2.5 3
"""


class TestConstants:
    def test_prints_labeled_lines_and_machine_block(self):
        proc = run_cli("constants", "--b", "0.5", "--eps", "0.05")
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert "J = 26" in lines
        assert "Lambda = 28" in lines
        machine = json.loads(lines[-1])
        assert machine["J"] == 26.0
        assert machine["R_min"] == pytest.approx(870.5245805022724)

    def test_out_of_domain_b_exits_2(self):
        proc = run_cli("constants", "--b", "0.6")
        assert proc.returncode == 2
        assert "b" in proc.stderr

    def test_delta_must_be_below_eps(self):
        proc = run_cli("constants", "--b", "0.3", "--eps", "0.05", "--delta", "0.05")
        assert proc.returncode == 2


class TestRun:
    def test_minimal_run_writes_record_and_manifest(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(RUN_CONFIG)
        out = tmp_path / "out"
        proc = run_cli("run", "--config", str(config), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        record = load_record(out / "ball.json")
        assert record["schema_version"] == 1
        entries = load_manifest(out)
        assert len(entries) == 1
        assert entries[0]["records"] == [str(out / "ball.json")]

    def test_rerun_is_byte_identical_up_to_wall_time(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(RUN_CONFIG)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert run_cli("run", "--config", str(config), "--out", str(out1)).returncode == 0
        assert run_cli("run", "--config", str(config), "--out", str(out2)).returncode == 0
        a = canonical_payload(load_record(out1 / "ball.json"))
        b = canonical_payload(load_record(out2 / "ball.json"))
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_missing_required_key_names_it(self, tmp_path):
        config = tmp_path / "broken.cfg"
        config.write_text(RUN_CONFIG.replace("R = 2\n", ""))
        proc = run_cli("run", "--config", str(config), "--out", str(tmp_path / "o"))
        assert proc.returncode == 2
        assert "'R'" in proc.stderr

    def test_unreadable_config_exits_2(self, tmp_path):
        proc = run_cli("run", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path))
        assert proc.returncode == 2

    def test_impossible_generation_exits_2(self, tmp_path):
        config = tmp_path / "impossible.cfg"
        config.write_text(
            RUN_CONFIG.replace("initial = exact_hyperbolic",
                               "initial = banded_perturbation\ncurvature_cap = 0.001")
        )
        proc = run_cli("run", "--config", str(config), "--out", str(tmp_path / "o"))
        assert proc.returncode == 2
        assert "curvature bound" in proc.stderr

    def test_blowup_exits_3(self, tmp_path):
        config = tmp_path / "boom.cfg"
        config.write_text(BLOWUP_CONFIG)
        proc = run_cli("run", "--config", str(config), "--out", str(tmp_path / "o"))
        assert proc.returncode == 3
        assert "blew up" in proc.stderr

    def test_write_failure_exits_4(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(RUN_CONFIG)
        blocker = tmp_path / "blocked"
        blocker.write_text("file, not a directory")
        proc = run_cli("run", "--config", str(config), "--out", str(blocker))
        assert proc.returncode == 4

    def test_env_var_default_out_dir(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(RUN_CONFIG)
        out = tmp_path / "envout"
        proc = run_cli("run", "--config", str(config), env={"HYPFLOW_OUT": str(out)})
        assert proc.returncode == 0
        assert (out / "ball.json").exists()


class TestSweep:
    def test_synthetic_fit_echoes_slope(self, tmp_path):
        data = tmp_path / "synthetic.csv"
        rows = [f"{R},{2.718281828459045 ** (0.2 * R)}" for R in (3, 4, 5, 6, 7)]
        data.write_text("\n".join(rows) + "\n")
        proc = run_cli("sweep", "--synthetic-fit", str(data))
        assert proc.returncode == 0
        assert "slope = 0.2" in proc.stdout
        assert "r_squared = 1" in proc.stdout

    def test_all_censored_exits_5(self, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text(SWEEP_CONFIG.replace("horizon = 100", "horizon = 0.02"))
        proc = run_cli("sweep", "--config", str(config), "--out", str(tmp_path / "o"))
        assert proc.returncode == 5
        assert "inconclusive" in proc.stderr

    def test_small_sweep_writes_csv_and_records(self, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text(SWEEP_CONFIG)
        out = tmp_path / "o"
        proc = run_cli("sweep", "--config", str(config), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        csv_path = out / "probe-sweep.csv"
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "R,control_time,censored,sandwich_violation,n_nodes,dr,wall_time_s"
        assert len(lines) == 1 + 3 + 3  # header, data rows, fit trailer
        assert all(line.startswith("#fit,") for line in lines[-3:])
        for name in ("probe-R2", "probe-R2.5", "probe-R3"):
            assert (out / f"{name}.json").exists()
        manifest = load_manifest(out)
        assert str(csv_path) in manifest[0]["records"]

    def test_config_without_sweep_section_exits_2(self, tmp_path):
        config = tmp_path / "plain.cfg"
        config.write_text(RUN_CONFIG)
        proc = run_cli("sweep", "--config", str(config), "--out", str(tmp_path / "o"))
        assert proc.returncode == 2
