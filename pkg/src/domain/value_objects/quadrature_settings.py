from dataclasses import dataclass

from ..exceptions import GiniDomainError


@dataclass(frozen=True)
class QuadratureSettings:
    """Adaptive Gauss-Legendre controls for integrals over the unit interval."""

    delta: float = 1e-10
    rel_tol: float = 1e-10
    nodes: int = 20
    initial_panels: int = 8
    max_doublings: int = 8

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 0.5:
            raise GiniDomainError(f"quadrature delta must lie in (0, 0.5), got {self.delta}")
        if self.rel_tol <= 0:
            raise GiniDomainError("quadrature tolerance must be positive")
        if self.nodes < 2 or self.initial_panels < 1 or self.max_doublings < 1:
            raise GiniDomainError("quadrature needs at least 2 nodes, 1 panel and 1 doubling")


@dataclass(frozen=True)
class VarianceSettings:
    """Truncation schedule of the asymptotic-variance double integral."""

    initial_delta: float = 1e-6
    floor_delta: float = 1e-12
    rel_tol: float = 1e-4
    accept_tol: float = 1e-2
    nodes: int = 12
    panels: int = 48

    def __post_init__(self) -> None:
        if not 0.0 < self.floor_delta <= self.initial_delta < 0.5:
            raise GiniDomainError("variance truncation needs 0 < floor <= initial < 0.5")
        if self.rel_tol <= 0 or self.accept_tol < self.rel_tol:
            raise GiniDomainError("variance tolerances must satisfy 0 < rel_tol <= accept_tol")
