from dataclasses import dataclass

from ..exceptions import GiniDomainError


@dataclass(frozen=True)
class SpecialFunctionTolerances:
    abs_tol: float = 1e-15
    rel_tol: float = 1e-14
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0 or self.max_iterations <= 0:
            raise GiniDomainError("special-function tolerances must all be positive")
