import logging
import multiprocessing
import os
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

MAX_WORKERS_ENV = "WHITTLE_LAB_MAX_WORKERS"


class ReplicationPool:
    """Fans independent replications out to worker processes.

    Results always come back in task order, so any reduction over them is
    independent of scheduling.
    """

    def __init__(self, workers: Optional[int] = None, max_workers: Optional[int] = None):
        """
        Initialize the pool settings.

        Args:
            workers: Requested worker count. Defaults to 1 (serial).
            max_workers: Upper cap. Defaults to the WHITTLE_LAB_MAX_WORKERS
                         env var, or the CPU count.
        """
        if max_workers is None:
            env_cap = os.environ.get(MAX_WORKERS_ENV)
            try:
                max_workers = int(env_cap) if env_cap else (os.cpu_count() or 1)
            except ValueError:
                raise ValueError(f"{MAX_WORKERS_ENV} must be an integer, got '{env_cap}'")

        requested = 1 if workers is None else int(workers)
        if requested < 1:
            raise ValueError(f"worker count must be positive, got {requested}")
        self.workers = max(1, min(requested, max_workers))
        if self.workers < requested:
            logger.info("worker count capped at %d (requested %d)", self.workers, requested)

    @property
    def parallel(self) -> bool:
        return self.workers > 1

    def map(self, func: Callable[[T], R], tasks: Iterable[T]) -> List[R]:
        """
        Apply ``func`` to every task.

        ``func`` and the tasks must be picklable when more than one worker is used.

        Returns:
            Results in task order.
        """
        tasks = list(tasks)
        if not self.parallel or len(tasks) < 2:
            return [func(task) for task in tasks]

        logger.debug("running %d tasks on %d workers", len(tasks), self.workers)
        with multiprocessing.Pool(processes=self.workers) as pool:
            return pool.map(func, tasks)
