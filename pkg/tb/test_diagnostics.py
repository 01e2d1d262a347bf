import json
import logging

from fptriplet.diagnostics import Tally, hit


def test_tally_counts_and_missing_names():
    """Test counters start at zero and accumulate"""
    tally = Tally()
    tally.hit("proposals")
    tally.hit("proposals", 2)
    assert tally["proposals"] == 3
    assert tally["never_hit"] == 0


def test_merge_tally_and_dict():
    """Test merge accepts both another tally and a plain counts dict"""
    a = Tally()
    a.hit("loops", 2)
    b = Tally()
    b.hit("loops", 3)
    a.merge(b).merge({"loops": 1, "cpp_jumps": 4})
    assert a.as_dict() == {"cpp_jumps": 4, "loops": 6}


def test_optional_hit():
    """Test the module-level hit ignores a missing tally"""
    hit(None, "anything")
    tally = Tally()
    hit(tally, "anything", 5)
    assert tally["anything"] == 5


def test_goals_and_save(tmp_path):
    """Test goal coverage and the JSON dump"""
    tally = Tally(goals={"loops": 2, "cpp_jumps": 1})
    tally.hit("loops", 3)
    assert tally.covered() == (1, 2)
    path = tmp_path / "tally.json"
    tally.save(path)
    data = json.loads(path.read_text())
    assert data["counts"] == {"loops": 3}
    assert data["goals_met"] == 1 and data["goals_total"] == 2


def test_report_logs_percentage(caplog):
    """Test the report logs every counter and the goal percentage"""
    tally = Tally(goals={"loops": 1})
    tally.hit("loops")
    with caplog.at_level(logging.INFO, logger="fptriplet.diagnostics"):
        tally.report()
    assert "loops: 1 (goal: 1)" in caplog.text
    assert "Goals met: 100.00% (1/1)" in caplog.text
