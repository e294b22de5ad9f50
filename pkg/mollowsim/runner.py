#!/usr/bin/env python3
"""
Sweep Runner Module

Runs independent simulation units in parallel with CPU-aware sizing.
Results are always returned in submission order, so the merged output does
not depend on the number of workers or on completion order.
"""

import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from typing import Any, Callable, List, Optional, Sequence

import psutil
from tqdm import tqdm

logger = logging.getLogger(__name__)


class CPUMonitor:
    """Suggest a worker count from the available cores"""

    def __init__(self):
        self.cpu_count = psutil.cpu_count(logical=True) or multiprocessing.cpu_count()

    def get_optimal_workers(self, requested: Optional[int] = None) -> int:
        """Requested count if given, otherwise every available core"""
        if requested is not None:
            if requested < 1:
                raise ValueError("worker count must be >= 1")
            if requested > self.cpu_count:
                logger.info("%d workers requested on %d cores", requested, self.cpu_count)
            return requested
        return max(1, self.cpu_count)


class SweepRunner:
    """Maps a top-level worker function over run units"""

    def __init__(self, max_workers: Optional[int] = None, use_multiprocessing: bool = True,
                 show_progress: bool = False, description: str = "units"):
        self.cpu_monitor = CPUMonitor()
        self.max_workers = self.cpu_monitor.get_optimal_workers(max_workers)
        self.use_multiprocessing = use_multiprocessing
        self.show_progress = show_progress
        self.description = description

    def map(self, worker: Callable[[Any], Any], units: Sequence[Any]) -> List[Any]:
        """Apply ``worker`` to every unit; the i-th result belongs to the i-th unit

        With multiprocessing the worker must be a module-level function and the
        units picklable.
        """
        units = list(units)
        if not units:
            return []
        workers = min(self.max_workers, len(units))
        if workers == 1:
            logger.debug("running %d %s sequentially", len(units), self.description)
            return [worker(unit) for unit in tqdm(units, desc=self.description,
                                                   disable=not self.show_progress)]

        mode = 'processes' if self.use_multiprocessing else 'threads'
        logger.debug("running %d %s on %d %s", len(units), self.description, workers, mode)
        executor_cls = ProcessPoolExecutor if self.use_multiprocessing else ThreadPoolExecutor
        results: List[Any] = [None] * len(units)
        with executor_cls(max_workers=workers) as executor:
            future_to_index = {executor.submit(worker, unit): i for i, unit in enumerate(units)}
            for future in tqdm(as_completed(future_to_index), total=len(units),
                               desc=self.description, disable=not self.show_progress):
                results[future_to_index[future]] = future.result()
        return results
