"""TrialRunner tests."""

import threading

import pytest
from atomicx import AtomicBool

from worker_pool import RunCancelledError, TrialRunner


def test_results_keep_task_order():
    tasks = list(range(103))
    for workers in (1, 2, 7, 200):
        assert TrialRunner(workers=workers).map(lambda t: t * t, tasks) == [t * t for t in tasks]


def test_empty_task_list():
    assert TrialRunner(workers=4).map(lambda t: t, []) == []


def test_uses_several_threads():
    seen = set()
    lock = threading.Lock()

    def record(task):
        with lock:
            seen.add(threading.current_thread().name)
        return task

    TrialRunner(workers=4).map(record, range(40))
    assert len(seen) > 1


def test_first_failure_is_raised():
    def fail_on_odd(task):
        if task % 2:
            raise ValueError(f"task {task}")
        return task

    with pytest.raises(ValueError, match="task 1"):
        TrialRunner(workers=1).map(fail_on_odd, range(10))
    with pytest.raises(ValueError):
        TrialRunner(workers=3).map(fail_on_odd, range(10))


def test_stop_signal_cancels_run():
    stop = AtomicBool(True)
    with pytest.raises(RunCancelledError):
        TrialRunner(workers=1, stop_signal=stop).map(lambda t: t, range(5))
    with pytest.raises(RunCancelledError):
        TrialRunner(workers=3, stop_signal=stop).map(lambda t: t, range(5))


def test_worker_count_from_environment(monkeypatch):
    import worker_pool
    monkeypatch.setattr(worker_pool, "resolve_thread_count", lambda requested=None: 3)
    assert TrialRunner().workers == 3
