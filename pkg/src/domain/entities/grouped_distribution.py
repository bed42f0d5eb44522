import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..exceptions import GiniDomainError, GroupedDataError
from .quantile_function import StepQuantile

logger = logging.getLogger(__name__)

PARTITION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Bracket:
    p_lo: float
    p_hi: float
    avg: float

    @property
    def width(self) -> float:
        return self.p_hi - self.p_lo


class GroupedDistribution:
    """Percentile brackets with bracket means for one (entity, year).

    The brackets must partition [0, 1]. Decreasing averages are an error unless
    ``allow_nonmonotone`` is set, in which case the levels are rearranged into
    increasing order and the row is flagged.
    """

    def __init__(
        self,
        entity: str,
        year: int,
        brackets: Sequence[Bracket],
        allow_nonmonotone: bool = False,
    ) -> None:
        if not brackets:
            raise GroupedDataError(f"{entity} {year}: no brackets")
        ordered = sorted(brackets, key=lambda b: b.p_lo)
        _validate_partition(entity, year, ordered)
        self.entity = entity
        self.year = year
        self.flagged = False
        if any(b.avg < a.avg for a, b in zip(ordered, ordered[1:], strict=False)):
            if not allow_nonmonotone:
                raise GroupedDataError(
                    f"{entity} {year}: bracket averages decrease; "
                    "pass allow_nonmonotone to rearrange them"
                )
            logger.warning("%s %s: non-monotone bracket averages rearranged", entity, year)
            ordered = _rearrange(ordered)
            self.flagged = True
        self.brackets = tuple(ordered)

    @property
    def key(self) -> tuple[str, int]:
        return (self.entity, self.year)

    def mean(self) -> float:
        return math.fsum(b.avg * b.width for b in self.brackets)

    def is_nonnegative(self) -> bool:
        return self.brackets[0].avg >= 0.0

    def to_step_quantile(self) -> StepQuantile:
        breakpoints = [0.0, *(b.p_hi for b in self.brackets[:-1]), 1.0]
        levels = [b.avg for b in self.brackets]
        return StepQuantile(breakpoints, levels)

    def top_share(self, alpha: float) -> float:
        """Share of the total held by the richest ``alpha`` of the population."""
        if not 0.0 < alpha < 1.0:
            raise GiniDomainError(f"top-share fraction must lie in (0, 1), got {alpha}")
        lorenz = self.to_step_quantile().lorenz(1.0 - alpha)
        return float(1.0 - lorenz[0])

    def merge(
        self,
        other: "GroupedDistribution",
        weight: float = 0.5,
        entity: str | None = None,
        year: int | None = None,
    ) -> "GroupedDistribution":
        """Population-weighted mixture: ``weight`` of this population, the rest from ``other``."""
        if not 0.0 < weight < 1.0:
            raise GiniDomainError(f"mixture weight must lie in (0, 1), got {weight}")
        atoms = [(b.avg, weight * b.width) for b in self.brackets]
        atoms += [(b.avg, (1.0 - weight) * b.width) for b in other.brackets]
        return GroupedDistribution(
            entity or f"{self.entity}+{other.entity}",
            self.year if year is None else year,
            _stack(sorted(atoms)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupedDistribution):
            return False
        return self.key == other.key and self.brackets == other.brackets

    def __hash__(self) -> int:
        return hash((self.key, self.brackets))

    def __repr__(self) -> str:
        return f"GroupedDistribution({self.entity!r}, {self.year}, brackets={len(self.brackets)})"


def _validate_partition(entity: str, year: int, ordered: Sequence[Bracket]) -> None:
    where = f"{entity} {year}"
    for bracket in ordered:
        if not (0.0 <= bracket.p_lo < bracket.p_hi <= 1.0):
            raise GroupedDataError(
                f"{where}: bracket [{bracket.p_lo:g}, {bracket.p_hi:g}] is not inside [0, 1]"
            )
        if not math.isfinite(bracket.avg):
            raise GroupedDataError(f"{where}: bracket average must be finite")
    if not math.isclose(ordered[0].p_lo, 0.0, abs_tol=PARTITION_TOLERANCE):
        raise GroupedDataError(f"{where}: brackets start at {ordered[0].p_lo:g}, not 0")
    if not math.isclose(ordered[-1].p_hi, 1.0, abs_tol=PARTITION_TOLERANCE):
        raise GroupedDataError(f"{where}: brackets end at {ordered[-1].p_hi:g}, not 1")
    for left, right in zip(ordered, ordered[1:], strict=False):
        if math.isclose(left.p_hi, right.p_lo, abs_tol=PARTITION_TOLERANCE):
            continue
        if right.p_lo > left.p_hi:
            raise GroupedDataError(
                f"{where}: partition gap between {left.p_hi:g} and {right.p_lo:g}"
            )
        raise GroupedDataError(
            f"{where}: brackets overlap on [{right.p_lo:g}, {left.p_hi:g}]"
        )


def _stack(atoms: Sequence[tuple[float, float]]) -> list[Bracket]:
    edges = np.concatenate(([0.0], np.cumsum([width for _, width in atoms])))
    edges[-1] = 1.0
    return [
        Bracket(float(edges[i]), float(edges[i + 1]), avg)
        for i, (avg, _) in enumerate(atoms)
        if edges[i + 1] > edges[i]
    ]


def _rearrange(ordered: Sequence[Bracket]) -> list[Bracket]:
    # Monotone rearrangement keeps every (level, mass) pair and the mean.
    return _stack(sorted((b.avg, b.width) for b in ordered))
