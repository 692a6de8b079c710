"""CLI surfaces: simulate, verify, enumerate, replay (serve is exercised
through the service tests)."""

import io
import json
from contextlib import redirect_stdout

from abdukit.cli import main


def run_cli(argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


class TestSimulate:
    def test_canonical_run_emits_transcript(self, tmp_path):
        out = tmp_path / "t.json"
        code, _ = run_cli([
            "simulate", "--config", "fixtures/plant_session.json",
            "--fuel", "40", "--out", str(out),
        ])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["terminal"]["status"] == "maximal"
        assert payload["turns"][0]["role"] == "reasoner"

    def test_seeded_random_walk_is_reproducible(self):
        argv = ["simulate", "--config", "fixtures/three_pred_session.json",
                "--seed", "5", "--fuel", "12"]
        code1, out1 = run_cli(argv)
        code2, out2 = run_cli(argv)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_protocol_and_bound_overrides(self):
        code, out = run_cli([
            "simulate", "--config", "fixtures/three_pred_session.json",
            "--protocol", "Simple", "--bound", "2", "--fuel", "12",
            "--seed", "3",
        ])
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["protocol"] == "Simple"
        assert payload["config"]["bound"] == 2

    def test_simulate_without_target_or_seed_is_a_usage_error(self, capsys):
        code, _ = run_cli([
            "simulate", "--config", "fixtures/three_pred_session.json",
        ])
        assert code == 2


class TestVerify:
    def test_halting_suite(self):
        code, out = run_cli([
            "verify", "--suite", "halting",
            "--config", "fixtures/two_pred_session.json",
        ])
        assert code == 0
        assert "PASS" in out

    def test_counterexamples_suite(self, tmp_path):
        report = tmp_path / "report.json"
        code, out = run_cli([
            "verify", "--suite", "counterexamples",
            "--prefix-length", "3", "--json", str(report),
        ])
        assert code == 0
        payload = json.loads(report.read_text())
        assert len(payload["reports"]) == 8
        assert all(r["passed"] for r in payload["reports"])


class TestEnumerate:
    def test_exact_count(self):
        code, out = run_cli([
            "enumerate", "--alphabet", "fixtures/mono_alphabet.json",
            "--max-order", "1", "--exact",
        ])
        assert code == 0
        payload = json.loads(out)
        assert payload["total"] == 8

    def test_cumulative_counts(self):
        code, out = run_cli([
            "enumerate", "--alphabet", "fixtures/mono_alphabet.json",
            "--max-order", "1",
        ])
        payload = json.loads(out)
        assert payload["classCounts"] == {"0": 1, "1": 8}


class TestReplay:
    def test_golden_replays_clean(self):
        code, out = run_cli(["replay", "fixtures/golden/plant_walkthrough.json"])
        assert code == 0
        assert "valid" in out

    def test_simulated_maximal_transcript_reports_convergence(self, tmp_path):
        out_file = tmp_path / "t.json"
        run_cli(["simulate", "--config", "fixtures/plant_session.json",
                 "--fuel", "40", "--out", str(out_file)])
        code, out = run_cli(["replay", str(out_file)])
        assert code == 0
        assert "converges" in out
