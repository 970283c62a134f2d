"""Run history database tests."""

from fractions import Fraction

import pytest

import database
from database import RunDatabase
from montecarlo import SimReport


def make_report(hits=5, seed=1):
    return SimReport(m=4, n=2, trials=10, seed=seed, hits=hits, theoretical=Fraction(1, 2))


@pytest.fixture
def db(tmp_path):
    return RunDatabase(tmp_path / "runs.db")


def test_log_and_read_back(db):
    run_id = db.log_run(make_report(), sampler="uniform", duration_seconds=1.5)
    assert run_id is not None

    history = db.get_run_history()
    assert len(history) == 1
    entry = history[0]
    assert entry["hits"] == 5
    assert entry["estimate"] == 0.5
    assert (entry["theoretical_num"], entry["theoretical_den"]) == (1, 2)
    assert entry["sampler"] == "uniform"
    assert entry["duration_seconds"] == 1.5


def test_newest_first(db):
    for seed in range(3):
        db.log_run(make_report(seed=seed))
    assert [entry["seed"] for entry in db.get_run_history()] == [2, 1, 0]
    assert len(db.get_run_history(limit=2)) == 2


def test_history_is_trimmed(db, monkeypatch):
    monkeypatch.setattr(database, "MAX_RUN_HISTORY_ENTRIES", 3)
    for seed in range(5):
        db.log_run(make_report(seed=seed))
    assert [entry["seed"] for entry in db.get_run_history(limit=10)] == [4, 3, 2]


def test_big_theoretical_values_survive(db):
    report = SimReport(m=201, n=100, trials=1, seed=0, hits=0, theoretical=Fraction(2 ** 200 + 1, 2 ** 201))
    db.log_run(report)
    assert SimReport.from_dict(db.get_run_history()[0]).theoretical == report.theoretical


def test_clear_history(db):
    db.log_run(make_report())
    db.log_run(make_report())
    assert db.clear_history() == 2
    assert db.get_run_history() == []
