"""Command-line interface: exit codes, formats, and byte determinism."""

import json

from gsverify import parse_rule
from gsverify.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def invoke_json(capsys, *argv):
    code, out, err = invoke(capsys, *argv)
    return code, json.loads(out), err


class TestCensusCommand:
    def test_counts_and_rule_strings(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "census", "--agents", "2", "--alts", "3", "--workers", "1"
        )
        assert code == 0
        assert payload["schema_version"] == "1"
        assert payload["counts"] == {
            "total": 19683,
            "unanimous": 729,
            "efficient": 64,
            "strategy_proof": 2,
            "dictatorial": 2,
        }
        assert payload["sp_equals_dictators"] is True
        for text in payload["strategy_proof_rules"]:
            assert parse_rule(text, 2, 3).to_string() == text

    def test_csv_summary(self, capsys):
        code, out, _ = invoke(
            capsys, "census", "--agents", "2", "--alts", "2", "--format", "csv",
            "--workers", "1",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("agents,alternatives,mode")
        assert lines[1] == "2,2,exhaustive,,,16,4,4,4,2,false"

    def test_verbose_csv_rows(self, capsys):
        code, out, _ = invoke(
            capsys, "census", "--agents", "2", "--alts", "2", "--format", "csv",
            "--verbose", "--workers", "1",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == (
            "rule_code,unanimous,efficient,strategy_proof,dictatorial,m_count,d_count"
        )
        assert len(lines) == 17
        # rule 0001 is the majority table: unanimous, efficient, strategy-proof,
        # not dictatorial, with every profile dictatorial for it
        assert lines[2] == "1,true,true,true,false,0,4"

    def test_verbose_requires_csv(self, capsys):
        code, _, err = invoke(capsys, "census", "--verbose", "--workers", "1")
        assert code == 2
        assert "csv" in err

    def test_budget_exceeded(self, capsys):
        code, _, err = invoke(
            capsys, "census", "--agents", "2", "--alts", "4", "--mode", "exhaustive",
            "--workers", "1",
        )
        assert code == 2
        assert "4294967296" in err

    def test_text_format(self, capsys):
        code, out, _ = invoke(
            capsys, "census", "--agents", "2", "--alts", "2", "--format", "text",
            "--workers", "1",
        )
        assert code == 0
        assert "strategy_proof: 4" in out


class TestClassifyCommand:
    def test_dictator_counts(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "classify", "--rule", "DICT:0", "--agents", "2", "--alts", "3"
        )
        assert code == 0
        assert payload["m_count"] == 0
        assert payload["d_count"] == 36
        assert payload["unanimous"] is True
        assert payload["examples"]["manipulable"] is None
        assert payload["examples"]["dictatorial"]["profile"] == "a,b,c|a,b,c"

    def test_sets_hex(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "classify", "--rule", "DICT:0", "--agents", "2", "--alts", "3",
            "--sets",
        )
        assert code == 0
        assert int(payload["d_set_hex"], 16).bit_count() == 36
        assert int(payload["m_set_hex"], 16) == 0

    def test_manipulable_example_witness(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "classify", "--rule", "TOPS:n=2,m=3:000011222",
            "--agents", "2", "--alts", "3", "--method", "scan",
        )
        assert code == 0
        assert payload["m_count"] > 0
        witness = payload["examples"]["manipulable"]["witness"]
        assert set(witness) == {
            "profile", "agent", "misreport", "sincere_outcome", "improved_outcome",
        }

    def test_non_tops_only_rejected(self, capsys):
        code, _, err = invoke(
            capsys, "classify", "--rule", "BORDALEX", "--agents", "2", "--alts", "3"
        )
        assert code == 2
        assert "tops-only" in err

    def test_malformed_rule_reports_position(self, capsys):
        code, _, err = invoke(
            capsys, "classify", "--rule", "TOPS:n=2,m=3:00011122x",
            "--agents", "2", "--alts", "3",
        )
        assert code == 2
        assert "position 21" in err


class TestLemmasCommand:
    def test_full_suite_passes(self, capsys):
        code, out, _ = invoke(
            capsys, "lemmas", "--suite", "all", "--agents", "2", "--alts", "3",
            "--format", "text", "--workers", "1",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 9
        assert [line.split()[0] for line in lines] == [
            "L1", "L3", "L4", "L5", "C1", "C2", "R1", "R2", "THM",
        ]
        assert all(" PASS " in line for line in lines)

    def test_theorem_control_fails_at_m2(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "lemmas", "THM", "--alts", "2", "--workers", "1"
        )
        assert code == 1
        assert payload["passed"] is False
        result = payload["results"][0]
        assert result["counterexample"]["equals"] == "MAJLEX"

    def test_unknown_id(self, capsys):
        code, _, err = invoke(capsys, "lemmas", "L2", "--workers", "1")
        assert code == 2
        assert "unknown check id" in err

    def test_csv_rows(self, capsys):
        code, out, _ = invoke(
            capsys, "lemmas", "L4", "R2", "--agents", "2", "--alts", "3",
            "--format", "csv", "--workers", "1",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("lemma,")
        assert lines[1].startswith("L4,2,3,exhaustive")
        assert lines[2].startswith("R2,2,3,exhaustive")


class TestInspectCommand:
    def test_borda_report(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "inspect", "--rule", "BORDALEX", "--agents", "2", "--alts", "3"
        )
        assert code == 0
        assert payload["unanimous"] is True
        assert payload["tops_only"] is False
        assert payload["efficient"] is True
        assert payload["strategy_proof"] is False
        assert payload["dictator"] is None
        assert payload["witnesses"]["manipulation"]["profile"]
        assert payload["witnesses"]["tops_only"] is not None
        assert parse_rule(payload["rule"], 2, 3).to_string() == payload["rule"]

    def test_majority_report(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "inspect", "--rule", "MAJLEX", "--agents", "3", "--alts", "2"
        )
        assert code == 0
        assert payload["strategy_proof"] is True
        assert payload["dictator"] is None


class TestCounterexampleCommand:
    def test_certificate(self, capsys):
        code, payload, _ = invoke_json(
            capsys, "counterexample", "--agents", "3", "--alts", "2"
        )
        assert code == 0
        assert payload["certificate"]["valid"] is True
        assert payload["rule"] == "MAJLEX"

    def test_rejects_many_alternatives(self, capsys):
        code, _, err = invoke(capsys, "counterexample", "--agents", "3", "--alts", "4")
        assert code == 2


class TestDeterminismAndOutput:
    def test_sampled_census_bytes(self, capsys):
        argv = (
            "census", "--agents", "3", "--alts", "3", "--mode", "sampled",
            "--samples", "1500", "--seed", "99", "--workers", "1",
        )
        _, first, _ = invoke(capsys, *argv)
        _, second, _ = invoke(capsys, *argv)
        assert first == second

    def test_sampled_lemma_bytes(self, capsys):
        argv = (
            "lemmas", "C2", "--agents", "2", "--alts", "3", "--samples", "500",
            "--seed", "7", "--workers", "1",
        )
        _, first, _ = invoke(capsys, *argv)
        _, second, _ = invoke(capsys, *argv)
        assert first == second

    def test_workers_do_not_change_bytes(self, capsys):
        base = ("census", "--agents", "2", "--alts", "3")
        _, serial, _ = invoke(capsys, *base, "--workers", "1")
        _, parallel, _ = invoke(capsys, *base, "--workers", "2")
        assert serial == parallel

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = invoke(
            capsys, "census", "--agents", "2", "--alts", "2", "--out", str(target),
            "--workers", "1",
        )
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["counts"]["total"] == 16

    def test_usage_error_exit_code(self, capsys):
        assert run(["no-such-command"]) == 2
