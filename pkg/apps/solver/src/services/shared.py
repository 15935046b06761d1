"""
Shared services and state for the solver.

Provides a singleton container for the process pool that runs solver calls
on behalf of the HTTP endpoints. mpmath keeps its precision in a
process-global context, so requests are never solved on server threads.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..config import SOLVER_WORKERS

logger = logging.getLogger(__name__)


@dataclass
class SharedState:
    """Shared application state across components."""
    started_at: float = field(default_factory=time.time)
    requests_served: int = 0
    failures: int = 0


class SharedServices:
    """
    Singleton container for shared services.

    The api lifespan hook and every endpoint reach the same executor through it.
    """

    _instance: "SharedServices | None" = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.state = SharedState()
        self._executor: ProcessPoolExecutor | None = None
        self._initialized = True
        logger.debug("SharedServices initialized")

    @property
    def executor(self) -> ProcessPoolExecutor:
        """The solver pool, created on first use."""
        return self._executor or self.init_executor()

    def init_executor(self, max_workers: int | None = None) -> ProcessPoolExecutor:
        """
        Initialize the shared solver pool.

        If already initialized, returns the existing instance.
        """
        if self._executor is not None:
            return self._executor

        workers = max(1, max_workers or SOLVER_WORKERS)
        self._executor = ProcessPoolExecutor(max_workers=workers)
        logger.info(f"Solver pool started with {workers} worker process(es)")
        return self._executor

    def close(self):
        """Clean up shared resources."""
        if self._executor:
            self._executor.shutdown(wait=True, cancel_futures=True)
            self._executor = None
        logger.debug("SharedServices closed")


def get_shared_services() -> SharedServices:
    """Get the shared services singleton."""
    return SharedServices()
