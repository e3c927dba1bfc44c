import logging
import multiprocessing
from typing import Any, Callable, Iterable, List, Sequence

import dask
import dask.config

from core.config import config

logger = logging.getLogger("SineThurston.Dask")


# ==========================================
# Dask 全局配置
# ==========================================
dask.config.set({
    "optimization.fuse.active": True,
    "scheduler": "threads",
})


class DaskService:
    """
    Runs lists of independent tasks on dask's threaded scheduler.

    Results come back in submission order, so callers can assemble
    outputs without caring about completion order.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(DaskService, cls).__new__(cls)
        return cls._instance

    @property
    def num_workers(self) -> int:
        return config.N_THREADS or multiprocessing.cpu_count()

    def map(self, fn: Callable[..., Any], items: Iterable[Any], *, label: str = "task") -> List[Any]:
        """Apply fn to every item in parallel; results in input order."""
        tasks = [dask.delayed(fn, pure=False)(item, dask_key_name=f"{label}-{i}")
                 for i, item in enumerate(items)]
        return self.compute(tasks, label=label)

    def compute(self, tasks: Sequence[Any], *, label: str = "task") -> List[Any]:
        if not tasks:
            return []
        workers = self.num_workers
        logger.debug(f"[DaskService] computing {len(tasks)} {label} task(s) on {workers} thread(s)")
        results = dask.compute(*tasks, scheduler="threads", num_workers=workers)
        return list(results)


dask_service = DaskService()
