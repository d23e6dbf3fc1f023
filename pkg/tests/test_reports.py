"""Tests for report serialization and the consistency ledger."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

import guardrails
from run_report import Report, input_digest, report_to_json, report_to_text, save_report, to_jsonable


@dataclass
class _Sample:
    value: Fraction
    word: tuple


class TestSerialization:
    def test_to_jsonable(self):
        data = to_jsonable({
            "p": Fraction(1, 3),
            "s": {"b", "a"},
            "flag": np.bool_(True),
            "n": np.int64(4),
            "sample": _Sample(Fraction(2), ("0", "1")),
        })
        assert data == {
            "p": "1/3", "s": ["a", "b"], "flag": True, "n": 4,
            "sample": {"value": "2", "word": ["0", "1"]},
        }

    def test_digest(self):
        assert input_digest(b"") == (
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        )

    def test_json_is_stable(self):
        def make():
            return Report(command="tmf", input_digest="sha256:00", verdicts={"z": 1, "a": Fraction(1, 2)})
        assert report_to_json(make()) == report_to_json(make())
        text = report_to_json(make())
        assert '"a": "1/2"' in text
        assert "timing" not in text
        assert text.index('"a"') < text.index('"z"')

    def test_text_rendering(self):
        report = Report(command="classify", input_digest="sha256:ab", verdicts={"tmf": True, "witness": None})
        text = report_to_text(report)
        assert text.startswith("soficlab classify report")
        assert "input: sha256:ab" in text
        assert "tmf: yes" in text
        assert "witness: -" in text

    def test_save_failure_is_not_fatal(self, tmp_path, capsys):
        blocker = tmp_path / "file.txt"
        blocker.write_text("x")
        assert save_report(Report("classify", None), str(blocker / "r.json")) is None
        assert "non-blocking" in capsys.readouterr().err


class TestLedger:
    @pytest.mark.parametrize("code, outcome, expected", [
        (0, None, "green"),
        (0, "consistent", "green"),
        (0, "tension", "yellow"),
        (0, "inconclusive", "yellow"),
        (1, None, "yellow"),
        (2, None, "yellow"),
        (3, None, "red"),
    ])
    def test_status_for(self, code, outcome, expected):
        assert guardrails.status_for(code, outcome) == expected

    def test_disabled_by_default(self):
        assert not guardrails.enabled()
        assert guardrails.record_event("classify", "sha256:00", "green") is None

    def test_summary(self, tmp_path):
        guardrails.configure(str(tmp_path / "ledger.db"))
        run_id = guardrails.start_run()
        guardrails.record_event("classify", "sha256:01", "green")
        guardrails.record_event("oracle", "sha256:02", "red", "disagree")
        summary = guardrails.get_run_summary(run_id)
        assert summary == {"run_id": run_id, "total": 2, "green": 1, "yellow": 0, "red": 1}
        guardrails.end_run()
