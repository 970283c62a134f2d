#!/usr/bin/env python3
"""Thread fan-out for independent trials and orthant checks."""

import logging
import threading
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from atomicx import AtomicBool

from config import resolve_thread_count
from models import ArbigeomError

T = TypeVar("T")
R = TypeVar("R")


class RunCancelledError(ArbigeomError):
    """Workers were stopped before every task finished."""


class TrialRunner:
    """Run a function over a list of tasks on a fixed number of threads.

    Tasks are split into contiguous chunks, one thread per chunk, and results
    are stored by task index, so the returned list never depends on how many
    workers ran or in which order they finished.
    """

    def __init__(self, workers: Optional[int] = None, stop_signal: Optional[AtomicBool] = None):
        """Initialize the runner.

        Args:
            workers: Number of threads; None reads ARBIGEOM_THREADS, 0 means one per CPU
            stop_signal: AtomicBool checked between tasks for graceful shutdown
        """
        self.workers = resolve_thread_count(workers)
        self.stop_signal = stop_signal if stop_signal is not None else AtomicBool(False)
        self.logger = logging.getLogger(__name__)

    def _should_stop(self) -> bool:
        return self.stop_signal.load()

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> List[R]:
        """Return [fn(task) for task in tasks], computed in parallel."""
        tasks = list(tasks)
        if not tasks:
            return []
        workers = min(self.workers, len(tasks))
        if workers == 1:
            inline: List[R] = []
            for task in tasks:
                if self._should_stop():
                    raise RunCancelledError("Run stopped before all tasks finished")
                inline.append(fn(task))
            return inline

        results: Dict[int, Any] = {}
        errors: Dict[int, BaseException] = {}
        failed = AtomicBool(False)
        chunk = -(-len(tasks) // workers)

        def work(start: int, stop: int) -> None:
            for index in range(start, stop):
                if self._should_stop() or failed.load():
                    return
                try:
                    results[index] = fn(tasks[index])
                except BaseException as e:
                    errors[index] = e
                    failed.store(True)
                    return

        threads = []
        for start in range(0, len(tasks), chunk):
            thread = threading.Thread(target=work, args=(start, min(start + chunk, len(tasks))), daemon=True)
            threads.append(thread)
            thread.start()
        self.logger.debug(f"Dispatched {len(tasks)} tasks over {len(threads)} threads")

        try:
            for thread in threads:
                while thread.is_alive():
                    thread.join(timeout=0.2)
        except KeyboardInterrupt:
            self.stop_signal.store(True)
            self.logger.info("Ctrl-C detected, stopping workers after their current task")
            for thread in threads:
                thread.join()
            raise

        if errors:
            first = min(errors)
            self.logger.error(f"Task {first} failed: {errors[first]}")
            raise errors[first]
        if len(results) != len(tasks):
            raise RunCancelledError(f"Only {len(results)} of {len(tasks)} tasks finished")
        return [results[i] for i in range(len(tasks))]
