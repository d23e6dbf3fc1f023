"""End-to-end tests of the soficlab command line through main(argv)."""

import json
import os
import sqlite3

from fixtures import fixture_path
from soficlab import main


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


class TestClassify:
    def test_goldenmean(self, capsys):
        code, report = run_json(capsys, "classify", fixture_path("goldenmean"))
        assert code == 0
        assert report["status"] == "complete"
        assert report["input_digest"].startswith("sha256:")
        assert all(report["verdicts"]["conditions"].values())
        assert report["verdicts"]["components"][0]["primitivity_index"] == 2
        assert report["witnesses"]["tmf"] is None

    def test_xnot(self, capsys):
        code, report = run_json(capsys, "classify", fixture_path("xnot"))
        assert code == 0
        assert report["verdicts"]["tmf"] is True
        assert report["verdicts"]["non_wandering"] is False
        assert report["witnesses"]["non_wandering"] == "01"

    def test_even(self, capsys):
        code, report = run_json(capsys, "classify", fixture_path("even"))
        assert code == 0
        assert report["verdicts"]["tmf"] is False
        assert report["verdicts"]["tmc"] is False
        assert set(report["witnesses"]["tmf"]) == {"w", "u", "x", "y"}

    def test_sft_input_reports_recoding(self, capsys, tmp_path):
        path = tmp_path / "sft.json"
        path.write_text(json.dumps({
            "format": "soficlab-sft-v1", "alphabet": ["0", "1"], "forbidden_words": ["000", "111"],
        }))
        code, report = run_json(capsys, "classify", str(path))
        assert code == 0
        assert report["verdicts"]["recoding"]["01"] == "01"

    def test_reports_are_deterministic(self, capsys):
        first = run_json(capsys, "classify", fixture_path("even"))
        second = run_json(capsys, "classify", fixture_path("even"))
        assert first == second

    def test_text_report(self, capsys):
        assert main(["classify", fixture_path("goldenmean")]) == 0
        out = capsys.readouterr().out
        assert out.startswith("soficlab classify report")
        assert "[verdicts]" in out

    def test_timing_only_on_request(self, capsys):
        _, plain = run_json(capsys, "classify", fixture_path("full_a"))
        _, timed = run_json(capsys, "classify", fixture_path("full_a"), "--timing")
        assert "timing" not in plain
        assert "seconds" in timed["timing"]

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "reports" / "gm.json"
        assert main(["classify", fixture_path("goldenmean"), "--json", "--out", str(target)]) == 0
        assert target.read_text() == capsys.readouterr().out


class TestExitCodes:
    def test_malformed_input(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format": "soficlab-presentation-v1", "alphabet": [')
        assert main(["classify", str(path), "--json"]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "line 1" in captured.err

    def test_missing_file(self, capsys, tmp_path):
        assert main(["classify", str(tmp_path / "nope.json")]) == 1

    def test_empty_shift(self, capsys, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({
            "format": "soficlab-presentation-v1", "alphabet": ["0"], "states": ["A", "B"],
            "edges": [{"from": "A", "to": "B", "label": "0"}],
        }))
        assert main(["classify", str(path)]) == 1
        assert "EmptyShift" in capsys.readouterr().err

    def test_usage_error(self, capsys):
        assert main(["tmf", fixture_path("goldenmean"), "--mode", "guess"]) == 1

    def test_resource_cap_gives_partial_report(self, capsys):
        code, report = run_json(capsys, "classify", fixture_path("even"), "--max-enumeration", "1")
        assert code == 2
        assert report["status"] == "partial"
        assert "enumeration" in report["errors"][0]


class TestTmfAndMonoid:
    def test_oracle_mode(self, capsys):
        code, report = run_json(capsys, "tmf", fixture_path("even"), "--mode", "oracle", "--max-len", "7")
        assert code == 0
        assert report["verdicts"]["tmf"] is False
        assert report["verdicts"]["search_length"] == 7

    def test_step(self, capsys):
        code, report = run_json(capsys, "tmf", fixture_path("goldenmean"), "--step", "2")
        assert code == 0
        assert report["verdicts"]["tmf"] is True
        assert report["config"]["step"] == 2

    def test_monoid(self, capsys):
        code, report = run_json(capsys, "monoid", fixture_path("goldenmean"))
        assert code == 0
        assert report["verdicts"]["monoid"]["element_count"] == 5
        assert report["verdicts"]["sofic"]["context_count"] == 4


class TestOracle:
    def test_even(self, capsys):
        code, report = run_json(capsys, "oracle", fixture_path("even"), "--max-len", "7")
        assert code == 0
        assert report["verdicts"]["oracle_tmf"]["tmf"] is False
        assert report["verdicts"]["oracle_tmf"]["agreement"] == "agree"
        assert report["verdicts"]["patching"]["holds"] is False

    def test_xnot(self, capsys):
        code, report = run_json(capsys, "oracle", fixture_path("xnot"), "--max-len", "8")
        assert code == 0
        assert report["witnesses"]["oracle_non_wandering"] == "01"
        assert report["verdicts"]["oracle_non_wandering"]["agreement"] == "agree"
        assert report["verdicts"]["patching"]["holds"] is True

    def test_default_length(self, capsys):
        code, report = run_json(capsys, "oracle", fixture_path("goldenmean"))
        assert code == 0
        assert report["config"]["max_len"] == 6


class TestMeasureCommands:
    def test_check_chain(self, capsys):
        code, report = run_json(capsys, "measure", "check", "--file", fixture_path("goldenmean_chain"))
        assert code == 0
        assert report["verdicts"]["kind"] == "markov-chain"
        assert report["verdicts"]["outcome"] == "consistent"

    def test_check_hidden(self, capsys):
        code, report = run_json(
            capsys, "measure", "check", "--file", fixture_path("even_hmm"),
            "--mrf-window", "4,2,2", "--markov-window", "4,4",
        )
        assert code == 0
        assert report["verdicts"]["outcome"] == "consistent-contrapositive"
        witness = report["witnesses"]["mrf"]
        assert witness["lhs"] != witness["rhs"]
        assert "/" in witness["lhs"] or witness["lhs"] in ("0", "1")

    def test_bad_window(self, capsys):
        assert main(["measure", "check", "--file", fixture_path("goldenmean_chain"), "--mrf-window", "1,2"]) == 1

    def test_support(self, capsys):
        code, report = run_json(capsys, "measure", "support", "--file", fixture_path("even_hmm"))
        assert code == 0
        assert report["verdicts"]["support"]["format"] == "soficlab-presentation-v1"
        assert len(report["verdicts"]["support"]["edges"]) == 5

    def test_decomposition_identity(self, capsys):
        code, report = run_json(
            capsys, "measure", "decomp-identity", "--file", fixture_path("goldenmean_chain"),
            "--r", "2", "--L", "5",
        )
        assert code == 0
        assert report["verdicts"]["holds"] is True
        assert report["verdicts"]["blocks"] == ["00", "01", "10"]

    def test_decomposition_precondition(self, capsys):
        code = main([
            "measure", "decomp-identity", "--file", fixture_path("goldenmean_chain"), "--r", "2", "--L", "4",
        ])
        assert code == 1
        assert "PreconditionViolated" in capsys.readouterr().err


class TestCorpusCommands:
    def test_generation_is_reproducible(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for target in (a, b):
            assert main(["corpus", "gen", "--out-dir", str(target), "--count", "6", "--seed", "3"]) == 0
        capsys.readouterr()
        names = sorted(os.listdir(a))
        assert names == sorted(os.listdir(b))
        assert "corpus.json" in names and "item_0005.json" in names
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_run(self, capsys, tmp_path):
        assert main(["corpus", "gen", "--out-dir", str(tmp_path), "--count", "8", "--seed", "5"]) == 0
        capsys.readouterr()
        code, report = run_json(capsys, "corpus", "run", str(tmp_path))
        assert code == 0
        assert report["verdicts"]["total"] == 8
        assert report["verdicts"]["invariant_violations"] == []
        assert report["verdicts"]["strata"]["inconsistent"] == 0


class TestLedger:
    def test_events_recorded(self, capsys, tmp_path):
        db = tmp_path / "ledger.db"
        assert main(["classify", fixture_path("goldenmean"), "--ledger", str(db)]) == 0
        assert main(["classify", str(tmp_path / "missing.json"), "--ledger", str(db)]) == 1
        with sqlite3.connect(db) as conn:
            rows = conn.execute("SELECT command, status FROM consistency_events ORDER BY id").fetchall()
        assert rows == [("classify", "green"), ("classify", "yellow")]
