import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..exceptions import GiniDomainError

FloatArray = npt.NDArray[np.float64]


class Sample:
    """Order statistics ``X_(1) <= ... <= X_(N)`` of an observed sample, ``N >= 2``."""

    def __init__(self, values: Sequence[float] | FloatArray) -> None:
        ordered = np.sort(np.asarray(values, dtype=np.float64).ravel())
        if len(ordered) < 2:
            raise GiniDomainError(f"a sample needs at least 2 values, got {len(ordered)}")
        if not np.all(np.isfinite(ordered)):
            raise GiniDomainError("sample values must be finite")
        ordered.setflags(write=False)
        self._values = ordered

    @property
    def values(self) -> FloatArray:
        return self._values

    @property
    def size(self) -> int:
        return len(self._values)

    def mean(self) -> float:
        return math.fsum(self._values) / self.size

    def is_nonnegative(self) -> bool:
        return bool(self._values[0] >= 0.0)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sample):
            return False
        return bool(np.array_equal(self._values, other.values))

    def __hash__(self) -> int:
        return hash(self._values.tobytes())
