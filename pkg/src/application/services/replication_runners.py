import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt

from ...domain.exceptions import GiniDomainError
from ..interfaces.replication_runner import ReplicationRunner

logger = logging.getLogger(__name__)


class SerialReplicationRunner(ReplicationRunner):
    def run(self, task: Callable[[int], float], replications: int) -> npt.NDArray[np.float64]:
        results = np.empty(replications, dtype=np.float64)
        for index in range(replications):
            results[index] = task(index)
        return results


class ThreadedReplicationRunner(ReplicationRunner):
    """Fans replications out over a thread pool; slot ``i`` always holds replication ``i``."""

    def __init__(self, threads: int = 1) -> None:
        if threads < 1:
            raise GiniDomainError(f"thread count must be at least 1, got {threads}")
        self.threads = threads

    def run(self, task: Callable[[int], float], replications: int) -> npt.NDArray[np.float64]:
        if self.threads == 1:
            return SerialReplicationRunner().run(task, replications)
        logger.debug("running %d replications on %d threads", replications, self.threads)
        results = np.empty(replications, dtype=np.float64)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            for index, value in enumerate(pool.map(task, range(replications))):
                results[index] = value
        return results
