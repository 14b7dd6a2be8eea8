"""A worker pool returning results in submission order."""
from __future__ import annotations

from multiprocessing.pool import ThreadPool
from types import TracebackType
from typing import (
    Callable,
    Iterable,
    List,
    Optional,
    Type,
    TypeVar,
)


T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """
    Map functions over items with a fixed number of worker threads.

    numpy releases the GIL inside the heavy kernels, so threads are enough and keep the network shared.
    Results are always returned in input order ; the worker count never changes them.
    """

    _workers: int
    _pool: Optional[ThreadPool]

    def __init__(
        self,
        workers: int = 1,
    ) -> None:
        """
        Initialize the pool.

        Args:
            workers: number of worker threads ; 1 runs everything in the calling thread
        """
        self._workers = max(1, workers)
        self._pool = None

    @property
    def workers(self) -> int:
        """
        Get the number of workers.

        Returns:
            the number of workers
        """
        return self._workers

    def map(
        self,
        func: Callable[[T], R],
        items: Iterable[T],
    ) -> List[R]:
        """
        Apply a function to every item.

        Args:
            func: a function
            items: the items

        Returns:
            the results, in the order of the items
        """
        items = list(items)
        if self._workers == 1 or len(items) < 2:
            return [func(item) for item in items]
        if self._pool is None:
            self._pool = ThreadPool(processes=self._workers)
        return self._pool.map(func, items)

    def close(self) -> None:
        """Stop the worker threads."""
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def __enter__(self) -> WorkerPool:
        """
        Enter the runtime context.

        Returns:
            the pool
        """
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc_inst: Optional[BaseException],
        exc_tb: Optional[TracebackType],
    ) -> None:
        """
        Exit the runtime context and stop the workers.

        Args:
            exc_type: exception type
            exc_inst: exception instance
            exc_tb: traceback
        """
        self.close()
