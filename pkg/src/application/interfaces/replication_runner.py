from abc import ABC, abstractmethod
from collections.abc import Callable

import numpy as np
import numpy.typing as npt


class ReplicationRunner(ABC):
    """Executes independent replications and returns their results by index."""

    @abstractmethod
    def run(self, task: Callable[[int], float], replications: int) -> npt.NDArray[np.float64]:
        pass
