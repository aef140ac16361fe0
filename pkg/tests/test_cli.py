import csv
import json
import math
import os

import pytest

from renewalcov.cli import main
from renewalcov.trace_io import read_trace_csv


def run_cli(*argv):
    return main(list(argv))


class TestSimulate:
    def test_writes_valid_trace(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert run_cli("simulate", "--seed", "42", "--steps", "1000",
                       "--out", str(out)) == 0
        trace = read_trace_csv(str(out))
        assert trace.n[-1] == 1000
        assert "P=" in capsys.readouterr().out

    def test_deterministic_across_invocations(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            run_cli("simulate", "--seed", "7", "--steps", "500", "--out", str(p))
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_path(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("simulate", "--seed", "1", "--steps", "500", "--out", str(a))
        run_cli("simulate", "--seed", "2", "--steps", "500", "--out", str(b))
        assert a.read_bytes() != b.read_bytes()

    def test_until_value_stopping(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run_cli("simulate", "--seed", "3", "--until-value", "10000",
                       "--out", str(out)) == 0
        trace = read_trace_csv(str(out))
        assert trace.P[-1] >= 10000
        assert trace.P[-2] < 10000

    def test_requires_exactly_one_horizon(self, tmp_path):
        out = str(tmp_path / "t.csv")
        assert run_cli("simulate", "--seed", "1", "--out", out) == 1
        assert run_cli("simulate", "--seed", "1", "--steps", "10",
                       "--until-value", "50", "--out", out) == 1

    def test_usage_errors_exit_one(self, tmp_path):
        assert run_cli("simulate", "--steps", "10",
                       "--out", str(tmp_path / "t.csv")) == 1  # missing --seed
        assert run_cli("nonsense") == 1

    def test_site_mode_horizon_guard(self, tmp_path):
        # Site-scan construction is capped at n = 10^4 steps.
        assert run_cli("simulate", "--seed", "1", "--mode", "site",
                       "--steps", "20000", "--out", str(tmp_path / "t.csv")) == 1

    def test_bad_prefix(self, tmp_path):
        assert run_cli("simulate", "--seed", "1", "--steps", "10",
                       "--prefix", "2,x", "--out", str(tmp_path / "t.csv")) == 1

    def test_config_file_merge(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"steps": 300}))
        out = tmp_path / "t.csv"
        assert run_cli("simulate", "--seed", "5", "--config", str(cfg),
                       "--out", str(out)) == 0
        assert read_trace_csv(str(out)).n[-1] == 300

    def test_explicit_flag_beats_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"steps": 300}))
        out = tmp_path / "t.csv"
        run_cli("simulate", "--seed", "5", "--steps", "100",
                "--config", str(cfg), "--out", str(out))
        assert read_trace_csv(str(out)).n[-1] == 100

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run_cli("simulate", "--seed", "5", "--steps", "10",
                       "--config", str(cfg),
                       "--out", str(tmp_path / "t.csv")) == 1

    def test_malformed_config_json(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert run_cli("simulate", "--seed", "5", "--steps", "10",
                       "--config", str(cfg),
                       "--out", str(tmp_path / "t.csv")) == 1


class TestDiagnose:
    @pytest.fixture
    def trace_path(self, tmp_path):
        out = tmp_path / "trace.csv"
        run_cli("simulate", "--seed", "42", "--steps", "5000", "--out", str(out))
        return out

    def test_report_written(self, trace_path, tmp_path):
        report = tmp_path / "report.json"
        assert run_cli("diagnose", "--trace", str(trace_path),
                       "--report", str(report)) == 0
        payload = json.loads(report.read_text())
        assert "karamata" in payload and "max_gap_ratio" in payload

    def test_assert_mode_passes_on_real_trace(self, trace_path, tmp_path, capsys):
        report = tmp_path / "report.json"
        assert run_cli("diagnose", "--trace", str(trace_path),
                       "--report", str(report), "--assert") == 0
        out = capsys.readouterr().out
        assert "pass" in out

    def test_malformed_trace_names_row(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("n,P,gap,lambda,log_lambda,S\n"
                       "1,2,0,1.0,0.0,1.0\n"
                       "2,9,7,0.5,-0.6931471805599453\n")  # row 3: 5 fields
        code = run_cli("diagnose", "--trace", str(bad),
                       "--report", str(tmp_path / "r.json"))
        assert code == 1
        assert "3" in capsys.readouterr().err

    def test_missing_trace_file(self, tmp_path):
        assert run_cli("diagnose", "--trace", str(tmp_path / "nope.csv"),
                       "--report", str(tmp_path / "r.json")) == 1


class TestEnsembleCommand:
    def test_outputs(self, tmp_path, capsys):
        out = tmp_path / "ens"
        assert run_cli("ensemble", "--seed", "2024", "--replicas", "4",
                       "--steps", "500", "--workers", "1",
                       "--out", str(out)) == 0
        assert (out / "summary.csv").exists()
        zcdfs = [p for p in os.listdir(out) if p.startswith("zcdf_")]
        assert len(zcdfs) == 1
        with open(out / "summary.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "n"

    def test_keep_traces(self, tmp_path):
        out = tmp_path / "ens"
        run_cli("ensemble", "--seed", "1", "--replicas", "2", "--steps", "100",
                "--workers", "1", "--keep-traces", "--out", str(out))
        assert (out / "trace_0.csv").exists()
        assert (out / "trace_1.csv").exists()


class TestConjectureCommand:
    def test_zcdf_written(self, tmp_path, capsys):
        out = tmp_path / "zcdf.csv"
        assert run_cli("conjecture", "--seed", "9", "--replicas", "8",
                       "--steps", "300", "--workers", "1",
                       "--out", str(out)) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["z", "F"]
        assert len(rows) == 9


class TestPrimesCommand:
    def test_check_dusart(self, capsys):
        assert run_cli("primes", "--max", "1000", "--check-dusart") == 0
        assert "0 violations" in capsys.readouterr().out

    def test_trace_comparison(self, tmp_path):
        trace = tmp_path / "t.csv"
        run_cli("simulate", "--seed", "4", "--steps", "200", "--out", str(trace))
        out = tmp_path / "cmp.csv"
        assert run_cli("primes", "--max", "500", "--trace", str(trace),
                       "--out", str(out)) == 0
        with open(out) as fh:
            header = fh.readline().strip()
        assert header == "n,P,p_n,ratio"

    def test_max_too_small(self):
        assert run_cli("primes", "--max", "5") == 1


class TestLiCommand:
    def test_soldner(self, capsys):
        assert run_cli("li", "--soldner") == 0
        value = float(capsys.readouterr().out.strip())
        assert value == pytest.approx(1.45136923, abs=1e-7)

    def test_eval_and_inv(self, capsys):
        assert run_cli("li", "--eval", "2.0") == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(
            1.0451637801, abs=1e-8)
        assert run_cli("li", "--inv", "1.0451637801174927") == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(
            2.0, abs=1e-8)

    def test_nothing_to_do(self):
        assert run_cli("li") == 1


class TestDominationCommand:
    def test_passes_with_feasible_conditioning(self, capsys):
        assert run_cli("domination", "--seed", "5", "--m", "3", "--p", "0.8",
                       "--n", "30", "--replicas", "200") == 0
        assert "max_violation" in capsys.readouterr().out

    def test_unreachable_conditioning_exit_two(self, capsys):
        code = run_cli("domination", "--seed", "5", "--m", "2", "--p", "1e-12",
                       "--n", "5", "--replicas", "1")
        assert code == 2
        assert "conditioning unreachable" in capsys.readouterr().err
