"""Command-line interface: validate, run, and report."""
from __future__ import annotations

import copy
import csv
import json

import pytest

from gazelidar import __version__
from gazelidar.cli import main
from helpers import CONFIG_DIR, DEFAULT_CONFIG

DEFAULT_JSON = json.loads(DEFAULT_CONFIG.read_text())


def _write_trimmed_config(tmp_path, **overrides):
    """A fast two-fog copy of the shipped config with an absolute trace path."""
    raw = copy.deepcopy(DEFAULT_JSON)
    raw["gaze_trace"] = str(CONFIG_DIR / "gaze_left.csv")
    raw["seeds"] = [101, 102]
    raw["fog_fractions"] = [0.0, 0.5]
    raw.update(overrides)
    path = tmp_path / "trimmed.json"
    path.write_text(json.dumps(raw))
    return path


def _run(tmp_path, out_name="out", config=None):
    config = config or _write_trimmed_config(tmp_path)
    out = tmp_path / out_name
    code = main(["run", "--config", str(config), "--out", str(out)])
    return code, out


class TestParser:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--config", "x", "--out", "y", "--frobnicate"])
        assert exc.value.code == 2

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestValidate:
    def test_accepts_the_shipped_config(self, capsys):
        assert main(["validate", "--config", str(DEFAULT_CONFIG)]) == 0
        assert capsys.readouterr().out.startswith("ok:")

    def test_rejects_structural_problems(self, tmp_path, capsys):
        raw = copy.deepcopy(DEFAULT_JSON)
        del raw["gaze_trace"]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        assert main(["validate", "--config", str(bad)]) == 1
        assert "invalid:" in capsys.readouterr().out

    def test_rejects_semantic_problems(self, tmp_path, capsys):
        raw = copy.deepcopy(DEFAULT_JSON)
        raw["gaze_trace"] = str(CONFIG_DIR / "gaze_left.csv")
        raw["scenario"]["target_id"] = 99
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        assert main(["validate", "--config", str(bad)]) == 1
        assert "target_id" in capsys.readouterr().out


class TestRun:
    def test_writes_the_three_result_files(self, tmp_path, capsys):
        code, out = _run(tmp_path)
        assert code == 0
        assert (out / "results.csv").is_file()
        assert (out / "density_samples.csv").is_file()
        assert (out / "summary.json").is_file()
        assert "16 runs, 16 detections, 0 failures" in capsys.readouterr().out

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        config = _write_trimmed_config(tmp_path, seeds=[])
        code = main(["run", "--config", str(config), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_semantically_invalid_config_exits_2(self, tmp_path, capsys):
        raw = copy.deepcopy(DEFAULT_JSON)
        raw["gaze_trace"] = str(CONFIG_DIR / "gaze_left.csv")
        raw["scenario"]["target_id"] = 99
        config = tmp_path / "bad.json"
        config.write_text(json.dumps(raw))
        code = main(["run", "--config", str(config), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "target_id" in capsys.readouterr().err

    def test_seed_override_narrows_the_sweep(self, tmp_path):
        config = _write_trimmed_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", str(config), "--out", str(out),
                     "--seed-override", "7"]) == 0
        with open(out / "results.csv", newline="") as fh:
            seeds = {row["seed"] for row in csv.DictReader(fh)}
        assert seeds == {"7"}

    def test_reruns_are_byte_identical(self, tmp_path):
        config = _write_trimmed_config(tmp_path)
        _, out_a = _run(tmp_path, "out_a", config)
        _, out_b = _run(tmp_path, "out_b", config)
        for name in ("results.csv", "density_samples.csv", "summary.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_failed_runs_exit_1(self, tmp_path, monkeypatch, capsys):
        # bypass the pre-run check so the runtime failure path is reachable
        monkeypatch.setattr("gazelidar.cli.validate_run_config", lambda c: [])
        config = _write_trimmed_config(
            tmp_path, sensor={"p_nominal_w": 1.0, "r_nominal_m": 100.0,
                              "p_max_ratio": 1.05})
        code, out = _run(tmp_path, "out", config)
        assert code == 1
        assert "failures" in capsys.readouterr().out
        assert (out / "summary.json").is_file()


class TestReport:
    def test_table_lists_every_cell(self, tmp_path, capsys):
        _, out = _run(tmp_path)
        capsys.readouterr()
        assert main(["report", "--out", str(out)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("variant")
        assert len(lines) == 2 + 8
        assert any(line.startswith("range_and_resolution") for line in lines)

    def test_json_matches_the_run_summary(self, tmp_path, capsys):
        _, out = _run(tmp_path)
        capsys.readouterr()
        assert main(["report", "--out", str(out), "--format", "json"]) == 0
        reported = json.loads(capsys.readouterr().out)
        summary = json.loads((out / "summary.json").read_text())
        assert reported["version"] == __version__
        stored = {(c["variant"], c["fog"]): c for c in summary["cells"]}
        assert len(reported["cells"]) == len(stored)
        for cell in reported["cells"]:
            expect = stored[(cell["variant"], cell["fog"])]
            assert cell["runs"] == expect["runs"]
            assert cell["detected"] == expect["detected"]
            assert cell["tta_s"]["median"] == pytest.approx(
                expect["tta_s"]["median"], rel=1e-9)
            assert cell["density_pts_per_deg"]["median"] == pytest.approx(
                expect["density_pts_per_deg"]["median"], rel=1e-9)

    def test_missing_directory_exits_2(self, tmp_path, capsys):
        assert main(["report", "--out", str(tmp_path / "nowhere")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_corrupt_results_name_the_row(self, tmp_path, capsys):
        out = tmp_path / "out"
        out.mkdir()
        (out / "results.csv").write_text(
            "variant,fog,seed,detected,tta_s,frames,mean_density_pts_per_deg\n"
            "baseline,0,101,true,4.824,1,0.84\n"
            "baseline,bad,101,true,4.824,1,0.84\n")
        (out / "density_samples.csv").write_text(
            "variant,fog,seed,frame,points_in_roi,roi_width_deg,density_pts_per_deg\n")
        assert main(["report", "--out", str(out)]) == 2
        assert "row 3" in capsys.readouterr().err
