from multiprocessing import Pool
from typing import Any, Callable, Iterable, Iterator, Optional
from tqdm import tqdm
from ... import logger
from ...config import config
from ...domain.repositories import IGridExecutor


class ProcessPoolGridExecutor(IGridExecutor):
    """Process-pool implementation of the grid executor interface.

    Tasks are handed to worker processes in chunks and yielded as they
    complete; with a single job everything runs in the calling process.
    """

    def __init__(
        self,
        jobs: Optional[int] = None,
        chunksize: int = 16,
        progress: bool = True
    ):
        """Initialize the executor.

        Args:
            jobs: Worker processes; defaults to NKCOVID_JOBS or the CPU count.
            chunksize: Tasks sent to a worker at once.
            progress: Whether to draw a tqdm progress bar on stderr.
        """
        self.jobs = jobs or config.jobs
        self.chunksize = chunksize
        self.progress = progress

    def map_unordered(
        self,
        fn: Callable[[Any], Any],
        tasks: Iterable[Any],
        total: Optional[int] = None
    ) -> Iterator[Any]:
        """Apply fn to every task and yield results in completion order.

        Args:
            fn: Picklable top-level function.
            tasks: Task arguments.
            total: Number of tasks, for progress reporting.

        Returns:
            Iterator over results, in any order.
        """
        with tqdm(total=total, desc="Evaluating grid points", ncols=100,
                  disable=not self.progress) as pbar:
            if self.jobs == 1:
                for task in tasks:
                    yield fn(task)
                    pbar.update()
                return

            logger.info(f"Starting a pool of {self.jobs} worker processes")
            with Pool(self.jobs) as pool:
                for result in pool.imap_unordered(fn, tasks, chunksize=self.chunksize):
                    yield result
                    pbar.update()
