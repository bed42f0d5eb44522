import logging
from collections.abc import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from ..exceptions import GiniDomainError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


class ObservationTuple:
    """One group ``y_1..y_n`` of independent realizations, in draw order."""

    def __init__(self, values: Sequence[float]) -> None:
        if len(values) < 2:
            raise GiniDomainError(f"an observation tuple needs at least 2 values, got {len(values)}")
        self.values = tuple(float(v) for v in values)

    @property
    def order(self) -> int:
        return len(self.values)

    @property
    def spread(self) -> float:
        return max(self.values) - min(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ObservationTuple):
            return False
        return self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)


class TupleSet:
    """``T`` observation tuples of common length ``n`` stored as a (T, n) array."""

    def __init__(self, data: npt.ArrayLike) -> None:
        array = np.asarray(data, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] == 0:
            raise GiniDomainError("a tuple set needs at least one tuple")
        if array.shape[1] < 2:
            raise GiniDomainError(f"tuples need at least 2 observations, got {array.shape[1]}")
        if not np.all(np.isfinite(array)):
            raise GiniDomainError("tuple values must be finite")
        array.setflags(write=False)
        self._data = array

    @classmethod
    def from_tuples(cls, tuples: Iterable[ObservationTuple]) -> "TupleSet":
        rows = [t.values for t in tuples]
        if not rows:
            raise GiniDomainError("a tuple set needs at least one tuple")
        if len({len(row) for row in rows}) != 1:
            raise GiniDomainError("all observation tuples must have the same length")
        return cls(rows)

    @classmethod
    def from_stream(cls, values: Sequence[float] | FloatArray, n: int) -> "TupleSet":
        """Chunk a sample stream into consecutive disjoint groups of ``n``."""
        flat = np.asarray(values, dtype=np.float64).ravel()
        count = len(flat) // n
        if count == 0:
            raise GiniDomainError(f"{len(flat)} values cannot form a single tuple of {n}")
        if count * n != len(flat):
            logger.debug("dropping %d trailing values that do not fill a tuple", len(flat) - count * n)
        return cls(flat[: count * n].reshape(count, n))

    @property
    def data(self) -> FloatArray:
        return self._data

    @property
    def count(self) -> int:
        return int(self._data.shape[0])

    @property
    def order(self) -> int:
        return int(self._data.shape[1])

    @property
    def spreads(self) -> FloatArray:
        return np.ptp(self._data, axis=1)

    @property
    def first(self) -> FloatArray:
        return self._data[:, 0]

    @property
    def running_maxima(self) -> FloatArray:
        """Column ``i`` holds ``max(y_1..y_{i+1})``."""
        return np.maximum.accumulate(self._data, axis=1)

    def scaled(self, factor: float) -> "TupleSet":
        return TupleSet(self._data * factor)

    def __getitem__(self, index: int) -> ObservationTuple:
        return ObservationTuple(list(self._data[index]))

    def __len__(self) -> int:
        return self.count
