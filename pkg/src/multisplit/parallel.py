"""Deterministic execution of the independent per-part work of one outer
iteration.

Results always come back in part order, so any reduction performed by the
caller is carried out in ascending ``k`` regardless of which worker
finished first.  Floating-point results are therefore bitwise identical to a
sequential run.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import WorkerError

__all__ = ['TaskPlan', 'WorkerPool', 'run_parallel', 'default_workers']

#: environment variable overriding the default worker count
WORKERS_ENV = 'MULTISPLIT_WORKERS'


def default_workers():
    """Worker count from ``$MULTISPLIT_WORKERS``, else 1."""
    value = os.environ.get(WORKERS_ENV)
    if not value:
        return 1
    count = int(value)
    if count < 1:
        raise ValueError(f'{WORKERS_ENV} must be a positive integer, got {value!r}')
    return count


@dataclass(frozen=True)
class TaskPlan:
    """Static round-robin assignment of part indices to workers."""
    worker_count: int
    tasks: tuple

    @classmethod
    def round_robin(cls, ntasks, worker_count):
        if worker_count < 1:
            raise ValueError('worker_count must be positive')
        return cls(worker_count, tuple(range(ntasks)))

    def assignment(self):
        """List of task indices per worker."""
        return [self.tasks[w::self.worker_count] for w in range(self.worker_count)]


class WorkerPool:
    """Reusable pool; ``map`` returns results in submission order.

    With one worker everything runs inline in the calling thread.
    """

    def __init__(self, worker_count=None):
        if worker_count is None:
            worker_count = default_workers()
        if worker_count < 1:
            raise ValueError('worker_count must be positive')
        self.worker_count = worker_count
        self._executor = None
        if worker_count > 1:
            self._executor = ThreadPoolExecutor(max_workers=worker_count)

    def map(self, fn, items):
        items = list(items)
        if self._executor is None:
            out = []
            for k, item in enumerate(items):
                try:
                    out.append(fn(item))
                except Exception as err:
                    raise WorkerError(f'task {k + 1} failed: {err}', index=k + 1) from err
            return out
        plan = TaskPlan.round_robin(len(items), self.worker_count)
        slots = [None] * len(items)

        def work(indices):
            for k in indices:
                try:
                    slots[k] = (True, fn(items[k]))
                except Exception as err:
                    slots[k] = (False, err)

        # barrier: wait for every worker before anyone reads the slots
        futures = [self._executor.submit(work, idx) for idx in plan.assignment() if idx]
        for f in futures:
            f.result()
        out = []
        for k, (ok, value) in enumerate(slots):
            if not ok:
                raise WorkerError(f'task {k + 1} failed: {value}', index=k + 1) from value
            out.append(value)
        return out

    def close(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def run_parallel(tasks, worker_count=1):
    """Run zero-argument callables, returning their results in task order."""
    with WorkerPool(worker_count) as pool:
        return pool.map(lambda task: task(), tasks)
