import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from ..exceptions import GiniDomainError


class ScoreKind(str, Enum):
    GD_M2 = "gd-m2"
    GD_M1 = "gd-m1"
    GC_M1 = "gc-m1"
    POLY = "poly"


@dataclass(frozen=True)
class ScoreVariant:
    """A scoring rule on (forecast, n-tuple); ``coefficients`` only for ``POLY``."""

    kind: ScoreKind
    order: int
    coefficients: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.order < 2:
            raise GiniDomainError(f"score tuples need at least 2 observations, got {self.order}")
        if self.kind is ScoreKind.POLY:
            if len(self.coefficients) != self.order:
                raise GiniDomainError(
                    f"polynomial score of order {self.order} needs {self.order} "
                    f"coefficients, got {len(self.coefficients)}"
                )
            if not all(math.isfinite(c) for c in self.coefficients):
                raise GiniDomainError("polynomial score coefficients must be finite")
        elif self.coefficients:
            raise GiniDomainError(f"{self.kind.value} takes no coefficients")

    @classmethod
    def poly(cls, coefficients: Sequence[float]) -> "ScoreVariant":
        return cls(ScoreKind.POLY, len(coefficients), tuple(float(c) for c in coefficients))

    @property
    def label(self) -> str:
        return self.kind.value
