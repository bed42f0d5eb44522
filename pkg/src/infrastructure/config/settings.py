import os
from collections.abc import Callable
from typing import TypeVar

from ...domain.exceptions import ConfigurationError
from ...domain.value_objects.quadrature_settings import QuadratureSettings, VarianceSettings
from ...domain.value_objects.special_function_tolerances import SpecialFunctionTolerances

T = TypeVar("T")


def _env(name: str, default: str, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name, default)
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{name}={raw!r} is not a valid {getattr(cast, '__name__', 'value')}") from exc


class GiniSettings:
    def __init__(
        self,
        seed: int = 0,
        threads: int = 1,
        log_level: str = "WARNING",
        quad_tol: float = 1e-10,
        quad_delta: float = 1e-10,
        variance_rel_tol: float = 1e-4,
        variance_accept_tol: float = 1e-2,
        special_max_iter: int = 200,
        allow_nonmonotone: bool = False,
    ):
        self.seed = seed
        self.threads = threads
        self.log_level = log_level
        self.quad_tol = quad_tol
        self.quad_delta = quad_delta
        self.variance_rel_tol = variance_rel_tol
        self.variance_accept_tol = variance_accept_tol
        self.special_max_iter = special_max_iter
        self.allow_nonmonotone = allow_nonmonotone

    @classmethod
    def from_env(cls) -> "GiniSettings":
        return cls(
            seed=_env("GININ_SEED", "0", int),
            threads=_env("GININ_THREADS", "1", int),
            log_level=os.getenv("GININ_LOG_LEVEL", "WARNING").upper(),
            quad_tol=_env("GININ_QUAD_TOL", "1e-10", float),
            quad_delta=_env("GININ_QUAD_DELTA", "1e-10", float),
            variance_rel_tol=_env("GININ_VARIANCE_REL_TOL", "1e-4", float),
            variance_accept_tol=_env("GININ_VARIANCE_ACCEPT_TOL", "1e-2", float),
            special_max_iter=_env("GININ_SPECIAL_MAX_ITER", "200", int),
            allow_nonmonotone=os.getenv("GININ_ALLOW_NONMONOTONE", "false").lower() == "true",
        )

    def quadrature(self) -> QuadratureSettings:
        return QuadratureSettings(delta=self.quad_delta, rel_tol=self.quad_tol)

    def variance(self) -> VarianceSettings:
        return VarianceSettings(rel_tol=self.variance_rel_tol, accept_tol=self.variance_accept_tol)

    def tolerances(self) -> SpecialFunctionTolerances:
        return SpecialFunctionTolerances(max_iterations=self.special_max_iter)
