"""Quantile functions: the integration substrate for every Choquet integral.

Step quantiles are left-continuous: level ``q_j`` holds on ``(t_{j-1}, t_j]``.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..exceptions import GiniDomainError

if TYPE_CHECKING:
    from .parametric_distribution import ParametricDistribution

FloatArray = npt.NDArray[np.float64]


class QuantileFunction(ABC):
    @abstractmethod
    def __call__(self, t: npt.ArrayLike) -> FloatArray:
        """Evaluate ``F^{-1}(t)`` for ``t`` in (0, 1)."""

    @abstractmethod
    def mean(self) -> float:
        pass

    @abstractmethod
    def is_nonnegative(self) -> bool:
        pass


class StepQuantile(QuantileFunction):
    def __init__(self, breakpoints: Sequence[float] | FloatArray, levels: Sequence[float] | FloatArray) -> None:
        bp = np.asarray(breakpoints, dtype=np.float64)
        lv = np.asarray(levels, dtype=np.float64)
        if bp.ndim != 1 or lv.ndim != 1 or len(bp) != len(lv) + 1 or len(lv) == 0:
            raise GiniDomainError("a step quantile needs k levels and k + 1 breakpoints")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise GiniDomainError("step breakpoints must start at 0 and end at 1")
        if np.any(np.diff(bp) <= 0.0):
            raise GiniDomainError("step breakpoints must be strictly increasing")
        if not np.all(np.isfinite(lv)):
            raise GiniDomainError("step levels must be finite")
        if np.any(np.diff(lv) < 0.0):
            raise GiniDomainError("step levels must be nondecreasing")
        # Merge runs of equal levels.
        keep = np.concatenate((np.diff(lv) != 0.0, [True]))
        self._levels = lv[keep]
        self._breakpoints = np.concatenate(([0.0], bp[1:][keep]))
        self._levels.setflags(write=False)
        self._breakpoints.setflags(write=False)

    @classmethod
    def from_sample(cls, values: Sequence[float] | FloatArray) -> "StepQuantile":
        """Empirical quantile: each order statistic carries mass ``1/N``."""
        ordered = np.sort(np.asarray(values, dtype=np.float64))
        if len(ordered) == 0:
            raise GiniDomainError("cannot build an empirical quantile from no values")
        return cls(np.arange(len(ordered) + 1) / len(ordered), ordered)

    @classmethod
    def constant(cls, value: float) -> "StepQuantile":
        return cls([0.0, 1.0], [value])

    @property
    def breakpoints(self) -> FloatArray:
        return self._breakpoints

    @property
    def levels(self) -> FloatArray:
        return self._levels

    @property
    def masses(self) -> FloatArray:
        return np.diff(self._breakpoints)

    @property
    def size(self) -> int:
        return len(self._levels)

    def __call__(self, t: npt.ArrayLike) -> FloatArray:
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if np.any((t_arr <= 0.0) | (t_arr >= 1.0)):
            raise GiniDomainError("quantile argument must lie in (0, 1)")
        index = np.searchsorted(self._breakpoints[1:-1], t_arr, side="left")
        return self._levels[index]

    def mean(self) -> float:
        return math.fsum(self._levels * self.masses)

    def variance(self) -> float:
        centred = self._levels - self.mean()
        return math.fsum(centred * centred * self.masses)

    def std(self) -> float:
        return math.sqrt(self.variance())

    def is_constant(self) -> bool:
        return self.size == 1

    def is_nonnegative(self) -> bool:
        return bool(self._levels[0] >= 0.0)

    def reflect(self) -> "StepQuantile":
        """Quantile of ``-X``."""
        return StepQuantile(1.0 - self._breakpoints[::-1], -self._levels[::-1])

    def shift(self, c: float) -> "StepQuantile":
        return StepQuantile(self._breakpoints, self._levels + c)

    def scale(self, factor: float) -> "StepQuantile":
        if factor <= 0:
            raise GiniDomainError(f"scale factor must be positive, got {factor}")
        return StepQuantile(self._breakpoints, self._levels * factor)

    def add_comonotonic(self, other: "StepQuantile") -> "StepQuantile":
        """Quantile of ``X + Y`` for comonotonic ``X`` and ``Y``: the pointwise sum."""
        grid = np.union1d(self._breakpoints, other.breakpoints)
        mids = 0.5 * (grid[:-1] + grid[1:])
        return StepQuantile(grid, self(mids) + other(mids))

    def partial_integral(self, p: npt.ArrayLike) -> FloatArray:
        """``integral_0^p q(t) dt``, exact and piecewise linear in ``p``."""
        p_arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
        if np.any((p_arr < 0.0) | (p_arr > 1.0)):
            raise GiniDomainError("Lorenz argument must lie in [0, 1]")
        cumulative = np.concatenate(([0.0], np.cumsum(self._levels * self.masses)))
        cell = np.clip(np.searchsorted(self._breakpoints, p_arr, side="right") - 1, 0, self.size - 1)
        return cumulative[cell] + self._levels[cell] * (p_arr - self._breakpoints[cell])

    def lorenz(self, p: npt.ArrayLike) -> FloatArray:
        total = self.positive_mean()
        values = self.partial_integral(p) / total
        p_arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
        values[p_arr == 1.0] = 1.0
        values[p_arr == 0.0] = 0.0
        return values

    def lorenz_area(self) -> float:
        """``integral_0^1 L(p) dp``; the trapezoid rule is exact on a piecewise-linear curve."""
        knots = self.lorenz(self._breakpoints)
        return math.fsum(0.5 * (knots[:-1] + knots[1:]) * self.masses)

    def positive_mean(self) -> float:
        if not self.is_nonnegative():
            raise GiniDomainError("Lorenz curve needs nonnegative levels")
        total = self.mean()
        if total <= 0.0:
            raise GiniDomainError("Lorenz curve needs a positive mean")
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepQuantile):
            return False
        return bool(
            np.array_equal(self._breakpoints, other.breakpoints)
            and np.array_equal(self._levels, other.levels)
        )

    def __hash__(self) -> int:
        return hash((self._breakpoints.tobytes(), self._levels.tobytes()))

    def __repr__(self) -> str:
        return f"StepQuantile(levels={self.size}, mean={self.mean():.6g})"


class ParametricQuantile(QuantileFunction):
    def __init__(self, distribution: "ParametricDistribution") -> None:
        self.distribution = distribution

    def __call__(self, t: npt.ArrayLike) -> FloatArray:
        return self.distribution.quantile(t)

    def mean(self) -> float:
        return self.distribution.mean()

    def is_nonnegative(self) -> bool:
        return self.distribution.is_nonnegative()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParametricQuantile):
            return False
        return self.distribution == other.distribution

    def __hash__(self) -> int:
        return hash(self.distribution)

    def __repr__(self) -> str:
        return f"ParametricQuantile({self.distribution.label})"
