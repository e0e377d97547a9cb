import numpy as np
import pytest

from multisplit import errors
from multisplit.iteration import SolveConfig, multisplit_run, pss_run
from multisplit.parallel import TaskPlan, WorkerPool, default_workers, run_parallel
from multisplit.problems import random_npd
from multisplit.splittings import ts_split

from conftest import random_multisplitting


def test_round_robin_plan():
    plan = TaskPlan.round_robin(5, 2)
    assert [list(a) for a in plan.assignment()] == [[0, 2, 4], [1, 3]]


def test_map_keeps_order():
    with WorkerPool(3) as pool:
        assert pool.map(lambda k: k * k, range(10)) == [k * k for k in range(10)]


def test_worker_error_carries_index():
    def boom(k):
        if k == 2:
            raise RuntimeError('bad')
        return k
    with pytest.raises(errors.WorkerError) as info:
        run_parallel([lambda k=k: boom(k) for k in range(4)], 2)
    assert info.value.index == 3  # 1-based, like part numbers


def test_default_workers_env(monkeypatch):
    monkeypatch.setenv('MULTISPLIT_WORKERS', '3')
    assert default_workers() == 3


@pytest.mark.parametrize('seed', range(3))
def test_multisplit_bitwise_deterministic(seed):
    ms = random_multisplitting(8, 4, seed, diagonal_weights=seed == 1)
    b = np.ones(8)
    runs = [multisplit_run(ms, b, SolveConfig(workers=w, record_iterates=True))
            for w in (1, 2, 8)]
    for r in runs[1:]:
        assert r.iterates_used == runs[0].iterates_used
        for x, y in zip(r.iterates, runs[0].iterates):
            assert np.array_equal(x, y)


def test_pss_bitwise_deterministic():
    A = random_npd(8, 2.0, seed=1)
    parts = [ts_split(A, 'strict-upper', 2.0), ts_split(A, 'strict-lower', 3.0)]
    runs = [pss_run(parts, np.ones(8), SolveConfig(workers=w, record_iterates=True))
            for w in (1, 2, 8)]
    for r in runs[1:]:
        assert all(np.array_equal(x, y) for x, y in zip(r.iterates, runs[0].iterates))


def test_hundred_repetitions_eight_workers():
    ms = random_multisplitting(6, 4, 3)
    cfg = SolveConfig(workers=8, record_iterates=True, max_iter=40)
    ref = multisplit_run(ms, np.ones(6), cfg).iterates
    for _ in range(100):
        run = multisplit_run(ms, np.ones(6), cfg).iterates
        assert all(np.array_equal(x, y) for x, y in zip(run, ref))
