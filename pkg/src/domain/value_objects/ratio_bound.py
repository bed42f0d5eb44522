from dataclasses import dataclass

from ..exceptions import GiniDomainError


@dataclass(frozen=True)
class RatioBound:
    """Closed bracket ``[lower, upper]`` for a ratio of two Choquet functionals.

    ``upper_attained`` is False when the upper value is a supremum that is only
    approached along the witness family.
    """

    lower: float
    upper: float
    lower_witness: str
    upper_witness: str
    lower_attained: bool = True
    upper_attained: bool = True

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise GiniDomainError(f"ratio bound lower {self.lower} exceeds upper {self.upper}")

    def contains(self, value: float, tolerance: float = 0.0) -> bool:
        return self.lower - tolerance <= value <= self.upper + tolerance
