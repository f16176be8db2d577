import csv
import json
import subprocess
import sys

import pytest

from weakorder.config import EXAMPLE_CONFIGS, ExperimentConfig, example_config
from weakorder.errors import ConfigInvalid


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "weakorder", *args],
                          capture_output=True, text=True)


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def read_outputs(out_dir):
    summary = json.loads((out_dir / "summary.json").read_text())
    with open(out_dir / "correlations.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    return summary, rows


class TestConfigValidation:
    def test_all_example_configs_validate(self):
        for name in EXAMPLE_CONFIGS:
            cfg = ExperimentConfig.from_dict(example_config(name))
            assert cfg.experiment == example_config(name)["experiment"]

    def test_unknown_key_rejected(self):
        cfg = example_config("forward_plus_projector")
        cfg["surprise"] = 1
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.from_dict(cfg)

    def test_short_schedule_rejected(self):
        cfg = example_config("forward_plus_projector")
        cfg["eps1_schedule"] = [0.2, 0.1]
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.from_dict(cfg)

    def test_increasing_schedule_rejected(self):
        cfg = example_config("forward_plus_projector")
        cfg["eps1_schedule"] = [0.05, 0.1, 0.2]
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.from_dict(cfg)

    def test_weak_asymmetry_schedule_rejected(self):
        cfg = example_config("strong_asymmetry_projector")
        cfg["eps1_schedule"] = [0.1, 0.2, 0.3]
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.from_dict(cfg)

    def test_seed_override_changes_hash(self):
        data = example_config("classical_linear")
        base = ExperimentConfig.from_dict(data)
        other = ExperimentConfig.from_dict(data, seed_override=5)
        assert other.seed == 5
        assert base.sha256 != other.sha256
        assert len(base.sha256) == 64


class TestRunCommand:
    def test_forward_example_passes(self, tmp_path):
        cfg_path = write_config(tmp_path, example_config("forward_plus_projector"))
        out_dir = tmp_path / "out"
        proc = run_cli("run", "--config", str(cfg_path), "--out", str(out_dir))
        assert proc.returncode == 0, proc.stderr
        summary, rows = read_outputs(out_dir)
        assert summary["passed"] is True
        assert summary["experiment"] == "forward_weak_value"
        assert summary["artifact"]["name"] == "weakorder"
        assert len(summary["config_sha256"]) == 64
        assert summary["oracle"]["re"] == pytest.approx(1.0, abs=1e-12)
        estimate = summary["estimates"][0]
        assert estimate["re"] == pytest.approx(1.0, abs=1e-3)
        assert estimate["im"] == pytest.approx(0.0, abs=1e-3)
        assert all(check["passed"] for check in summary["checks"])
        # 4 channels per coupling point
        assert len(rows) == 4 * 4

    def test_csv_schema_and_float_format(self, tmp_path):
        cfg_path = write_config(tmp_path, example_config("forward_plus_projector"))
        out_dir = tmp_path / "out"
        assert run_cli("run", "--config", str(cfg_path), "--out", str(out_dir)).returncode == 0
        with open(out_dir / "correlations.csv", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            body = list(reader)
        assert header == ["experiment", "order", "eps1", "eps2", "channel", "value"]
        channels = {row[4] for row in body}
        assert channels == {"Q1Q2", "P1Q2", "Q1", "Q2"}
        for row in body:
            for text in (row[2], row[3], row[5]):
                assert text == format(float(text), ".17g")
        eps1_values = [float(row[2]) for row in body if row[4] == "Q1Q2"]
        assert eps1_values == sorted(eps1_values, reverse=True)

    def test_byte_determinism(self, tmp_path):
        cfg_path = write_config(tmp_path, example_config("classical_linear"))
        first, second = tmp_path / "a", tmp_path / "b"
        assert run_cli("run", "--config", str(cfg_path), "--out", str(first),
                       "--seed", "3").returncode == 0
        assert run_cli("run", "--config", str(cfg_path), "--out", str(second),
                       "--seed", "3").returncode == 0
        for name in ("summary.json", "correlations.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_classical_check_passes(self, tmp_path):
        cfg_path = write_config(tmp_path, example_config("classical_linear"))
        out_dir = tmp_path / "out"
        proc = run_cli("run", "--config", str(cfg_path), "--out", str(out_dir))
        assert proc.returncode == 0, proc.stderr
        summary, rows = read_outputs(out_dir)
        assert summary["passed"] is True
        assert summary["rhs"]["total"] == pytest.approx(1.0, abs=1e-10)
        names = [check["name"] for check in summary["checks"]]
        assert any(name.startswith("mc_matches_rhs") for name in names)
        assert {row["channel"] for row in rows} == {"Q1Q2"}

    def test_failed_check_exits_one(self, tmp_path):
        cfg = example_config("pointer_conditions_boosted")
        cfg["expect"] = {"all_pass": True}
        cfg_path = write_config(tmp_path, cfg)
        out_dir = tmp_path / "out"
        proc = run_cli("run", "--config", str(cfg_path), "--out", str(out_dir))
        assert proc.returncode == 1
        summary, _ = read_outputs(out_dir)
        assert summary["passed"] is False

    def test_malformed_json_exits_two(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        proc = run_cli("run", "--config", str(path), "--out", str(tmp_path / "out"))
        assert proc.returncode == 2

    def test_invalid_schema_exits_two(self, tmp_path):
        cfg = example_config("forward_plus_projector")
        cfg["eps1_schedule"] = [0.2, 0.1]
        cfg_path = write_config(tmp_path, cfg)
        proc = run_cli("run", "--config", str(cfg_path), "--out", str(tmp_path / "out"))
        assert proc.returncode == 2
        assert "config error" in proc.stderr

    def test_numerical_failure_exits_three(self, tmp_path):
        # eps2 = 20 shifts the second pointer past the grid translation
        # guard (box 32, guard 8)
        cfg = example_config("forward_plus_projector")
        cfg["eps2"] = 20.0
        cfg_path = write_config(tmp_path, cfg)
        out_dir = tmp_path / "out"
        proc = run_cli("run", "--config", str(cfg_path), "--out", str(out_dir))
        assert proc.returncode == 3
        summary, rows = read_outputs(out_dir)
        assert summary["passed"] is False
        assert summary["error"]["name"] == "TranslationOutOfRange"
        assert rows == []


class TestOtherCommands:
    def test_validate_accepts_example(self, tmp_path):
        cfg_path = write_config(tmp_path, example_config("order_symmetry_imaginary"))
        proc = run_cli("validate", "--config", str(cfg_path))
        assert proc.returncode == 0
        assert "OK" in proc.stdout

    def test_validate_rejects_unknown_key(self, tmp_path):
        cfg = example_config("order_symmetry_imaginary")
        cfg["bogus"] = True
        cfg_path = write_config(tmp_path, cfg)
        assert run_cli("validate", "--config", str(cfg_path)).returncode == 2

    def test_list_presets_contents_and_stability(self):
        first = run_cli("list-presets")
        second = run_cli("list-presets")
        assert first.returncode == 0
        assert first.stdout == second.stdout
        for expected in ("pauli_x", "strange_weak_value_tan_theta", "classical_harmonic"):
            assert expected in first.stdout
