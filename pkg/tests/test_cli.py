"""
Tests for the itc command line.
"""

import json
from unittest.mock import patch

import pandas as pd
import pytest

from src.cli.main import main
from src.cli.selftest import (
    DEFAULT_GOLDEN,
    CheckFailed,
    CheckResult,
    check_golden_vectors,
    load_golden,
)

SMALL = ["--frame-size", "40", "--max-iter", "6", "--seed", "4"]


class TestRate:

    def test_regular_unpunctured(self, capsys):
        assert main(["rate"]) == 0
        out = capsys.readouterr().out
        assert "d_avg=2.0000" in out
        assert "R=0.3333" in out

    def test_half_rate(self, capsys):
        assert main(["rate", "--puncture", "10"]) == 0
        out = capsys.readouterr().out
        assert "theta=0.6667" in out
        assert "R=0.5000" in out

    def test_irregular_profile(self, capsys):
        assert main(["rate", "--profile", "2:0.85,7:0.15", "--puncture", "11101101110"]) == 0
        out = capsys.readouterr().out
        assert "d_avg=2.7500" in out
        assert "R=0.3333" in out

    def test_preset_label(self, capsys):
        assert main(["rate", "--preset", "ITC-1003-qpsk"]) == 0
        assert "consistent=no" in capsys.readouterr().out

    def test_bad_profile_token(self, capsys):
        assert main(["rate", "--profile", "2:0.5,x"]) == 2
        assert "'x'" in capsys.readouterr().err

    def test_bad_puncture(self, capsys):
        assert main(["rate", "--puncture", "000"]) == 2
        assert "000" in capsys.readouterr().err


class TestEncodeDecode:

    def test_encode_given_bits(self, capsys, tmp_path):
        table = tmp_path / "pi.txt"
        code = main(
            [
                "encode", "--frame-size", "8", "--puncture", "10",
                "--bits", "10110011", "--dump-interleaver", str(table),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out.strip()
        assert len(out) == 8 + 8 + 6
        assert out.startswith("10110011")
        assert table.read_text().splitlines()[0] == "N=16 seed=0"

    def test_encode_wrong_length(self, capsys):
        assert main(["encode", "--frame-size", "8", "--bits", "101"]) == 2
        assert "frame size is 8" in capsys.readouterr().err

    def test_encode_is_seeded(self, capsys):
        main(["encode", *SMALL])
        first = capsys.readouterr().out
        main(["encode", *SMALL])
        assert capsys.readouterr().out == first

    def test_decode_with_trace(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        assert main(["decode", *SMALL, "--ebno", "20", "--trace", str(trace)]) == 0
        out = capsys.readouterr().out
        assert "bit_errors=0/40" in out
        frame = pd.read_csv(trace)
        assert list(frame.columns) == ["iteration", "source", "copy", "extrinsic", "next_apriori"]
        assert frame["iteration"].min() == 1
        assert len(frame) % 80 == 0
        assert set(frame["source"]) == set(range(40))

    def test_decode_needs_ebno(self):
        with pytest.raises(SystemExit) as exit_info:
            main(["decode", *SMALL])
        assert exit_info.value.code == 2


class TestSweep:

    def sweep(self, out, *extra):
        return main(
            [
                "--quiet", "sweep", *SMALL, "--ebno", "30",
                "--min-frame-errors", "1", "--max-frames", "3",
                "--out", str(out), *extra,
            ]
        )

    def test_high_ebno_has_no_errors(self, tmp_path):
        out = tmp_path / "high.csv"
        assert self.sweep(out) == 0
        frame = pd.read_csv(out)
        assert frame["ber"].tolist() == [0.0]
        assert frame["frames"].tolist() == [3]
        assert out.with_suffix(".json").exists()

    def test_same_seed_same_bytes(self, tmp_path):
        self.sweep(tmp_path / "a.csv", "--ebno", "1:2:0.5", "--max-frames", "5")
        self.sweep(tmp_path / "b.csv", "--ebno", "1:2:0.5", "--max-frames", "5")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert len(pd.read_csv(tmp_path / "a.csv")) == 3

    def test_strict_fails_on_censored_points(self, tmp_path):
        assert self.sweep(tmp_path / "c.csv", "--strict") == 1

    def test_config_file_and_flag_override(self, tmp_path):
        config = tmp_path / "sweep.json"
        config.write_text(
            json.dumps({"frame_size": 20, "ebno": 30.0, "max_frames": 2, "min_frame_errors": 1})
        )
        out = tmp_path / "cfg.csv"
        code = main(
            ["--quiet", "sweep", "--config", str(config), "--max-frames", "4", "--out", str(out)]
        )
        assert code == 0
        assert pd.read_csv(out)["frames"].tolist() == [4]
        mirror = json.loads(out.with_suffix(".json").read_text())
        assert mirror["config"]["codec"]["frame_size"] == 20

    def test_bad_config_is_usage_error(self, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"frame_size": 20, "ebno": 1.0, "colour": "blue"}))
        assert main(["sweep", "--config", str(config)]) == 2
        assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 2

    def test_unusable_ebno_is_usage_error(self, tmp_path, capsys):
        """Test a grid point without a usable noise variance stops before any frame."""
        out = tmp_path / "far.csv"
        assert self.sweep(out, "--ebno", "4000") == 2
        assert "noise variance" in capsys.readouterr().err
        assert not out.exists()
        assert main(["decode", *SMALL, "--ebno", "4000"]) == 2

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("x")
        assert self.sweep(blocker / "out.csv") == 1

    def test_environment_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ITC_SEED", "9")
        out = tmp_path / "env.csv"
        main(["--quiet", "sweep", "--frame-size", "20", "--ebno", "30", "--max-frames", "1",
              "--out", str(out)])
        mirror = json.loads(out.with_suffix(".json").read_text())
        assert mirror["config"]["master_seed"] == 9

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("ITC_WORKERS", "many")
        assert main(["rate"]) == 2


class TestCapacity:

    def test_curve(self, capsys):
        assert main(["capacity", "--snr", "0:1:1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "snr_db,capacity"
        assert lines[1] == "0,1.000000"
        assert len(lines) == 3

    def test_sweep_overlay(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        TestSweep().sweep(out)
        capsys.readouterr()
        assert main(["capacity", "--snr", "0", "--sweep-json", str(out.with_suffix(".json"))]) == 0
        out_text = capsys.readouterr().out
        assert "ebno_db,snr_db,throughput,capacity_gap_db" in out_text
        assert out_text.strip().splitlines()[-1].startswith("30,")


class TestSelftest:

    def test_passes(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "checks passed" in out

    def test_corrupted_golden_fails(self, capsys, tmp_path):
        golden = tmp_path / "golden.txt"
        golden.write_text("input  1101\nparity 1111\n")
        assert main(["selftest", "--golden", str(golden)]) == 1
        out = capsys.readouterr().out
        assert "FAIL RSC golden vectors" in out
        assert "CheckFailed: shift register gives" in out

    def test_failed_check_raises_named_error(self, tmp_path):
        """Test a mismatch raises CheckFailed rather than a bare assert."""
        golden = tmp_path / "golden.txt"
        golden.write_text("input  1101\nparity 1111\n")
        with pytest.raises(CheckFailed, match="golden file says"):
            check_golden_vectors(golden)
        assert not issubclass(CheckFailed, AssertionError)

    def test_default_golden_ships_with_package(self):
        """Test the golden vectors load from package data without a path."""
        assert DEFAULT_GOLDEN.is_file()
        assert len(load_golden(DEFAULT_GOLDEN)) >= 1
        check_golden_vectors(DEFAULT_GOLDEN)

    @patch("src.cli.main.run_selftest")
    def test_exit_code_follows_results(self, mock_selftest, capsys):
        mock_selftest.return_value = [
            CheckResult("one", True, 0.1),
            CheckResult("two", False, 0.2, "CheckFailed: off by one"),
        ]
        assert main(["selftest"]) == 1
        out = capsys.readouterr().out
        assert "FAIL two (0.20s): CheckFailed: off by one" in out
        assert "1/2 checks passed" in out
        mock_selftest.assert_called_once_with(None)

    def test_golden_parser_rejects_junk(self, tmp_path):
        golden = tmp_path / "junk.txt"
        golden.write_text("hello 1\n")
        with pytest.raises(ValueError):
            load_golden(golden)


class TestPresetsCommand:

    def test_lists_all(self, capsys):
        assert main(["presets"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 24
        assert lines[0].startswith("ITC-") or lines[0].startswith("RATE-")
