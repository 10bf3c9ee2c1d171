"""Tests for the replication worker pool."""
import pytest

from src.utils.pool import MAX_WORKERS_ENV, ReplicationPool


class TestReplicationPool:

    def test_serial_default(self):
        pool = ReplicationPool()
        assert pool.workers == 1
        assert not pool.parallel
        assert pool.map(abs, [-1, 2, -3]) == [1, 2, 3]

    def test_parallel_keeps_task_order(self):
        pool = ReplicationPool(2, max_workers=2)
        assert pool.parallel
        assert pool.map(abs, range(-20, 0)) == list(range(20, 0, -1))

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv(MAX_WORKERS_ENV, "3")
        assert ReplicationPool(8).workers == 3

    def test_invalid_env(self, monkeypatch):
        monkeypatch.setenv(MAX_WORKERS_ENV, "many")
        with pytest.raises(ValueError, match=MAX_WORKERS_ENV):
            ReplicationPool(2)

    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            ReplicationPool(0, max_workers=4)
