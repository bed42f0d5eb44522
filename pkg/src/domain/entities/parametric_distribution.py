"""The catalog of parametric families with closed-form higher-order Gini values.

Every family exposes its quantile twice: ``quantile(t)`` for the lower half
and ``upper_quantile(u) = quantile(1 - u)`` evaluated without forming ``1 - u``,
so integrals reach both tails at full precision.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
import numpy.typing as npt

from ..exceptions import AssumptionViolatedError, GiniDomainError
from ..services import special_functions as sf
from ..value_objects.distortion_function import DistortionFunction
from ..value_objects.special_function_tolerances import SpecialFunctionTolerances
from .quantile_function import StepQuantile

FloatArray = npt.NDArray[np.float64]


def _as_unit_array(t: npt.ArrayLike) -> FloatArray:
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(~((t_arr > 0.0) & (t_arr < 1.0))):
        raise GiniDomainError("quantile argument must lie in (0, 1)")
    return t_arr


class ParametricDistribution(ABC):
    family: ClassVar[str]
    is_continuous: ClassVar[bool] = True

    def quantile(self, t: npt.ArrayLike) -> FloatArray:
        return self._quantile(_as_unit_array(t))

    def upper_quantile(self, u: npt.ArrayLike) -> FloatArray:
        """``quantile(1 - u)`` for ``u`` in (0, 1)."""
        return self._upper_quantile(_as_unit_array(u))

    def quantile_split(self, t: FloatArray, u: FloatArray) -> FloatArray:
        """Quantile at ``t`` given both ``t`` and ``u = 1 - t``, each accurate on its own half."""
        lower = t <= 0.5
        out = np.empty_like(t)
        out[lower] = self._quantile(t[lower])
        out[~lower] = self._upper_quantile(u[~lower])
        return out

    @abstractmethod
    def _quantile(self, t: FloatArray) -> FloatArray:
        pass

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        return self._quantile(1.0 - u)

    @abstractmethod
    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        pass

    def survival(self, x: npt.ArrayLike) -> FloatArray:
        """``1 - F(x)``; families override it where the tail needs full precision."""
        return 1.0 - self.cdf(x)

    def density(self, x: npt.ArrayLike) -> FloatArray:
        raise AssumptionViolatedError(f"{self.family} has no density")

    @abstractmethod
    def mean(self) -> float:
        pass

    @abstractmethod
    def variance(self) -> float:
        pass

    @abstractmethod
    def is_nonnegative(self) -> bool:
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        """``family:p1,p2`` form accepted by :func:`parse_distribution`."""

    def closed_form_gd(self, n: int) -> float | None:
        return None

    def closed_form_gc(self, n: int) -> float | None:
        gd = self.closed_form_gd(n)
        if gd is None:
            return None
        return gd / self.positive_mean()

    def as_step(self) -> StepQuantile | None:
        """Exact step quantile for discrete families."""
        return None

    def draw(self, rng: np.random.Generator, count: int) -> FloatArray:
        """Inverse-transform draws from an explicit generator."""
        u = rng.random(count)
        return self.quantile_split(u, 1.0 - u)

    def sample(self, count: int, seed: int) -> FloatArray:
        if count < 1:
            raise GiniDomainError(f"sample size must be at least 1, got {count}")
        if seed < 0:
            raise GiniDomainError(f"seed must be nonnegative, got {seed}")
        return self.draw(np.random.default_rng(seed), count)

    def positive_mean(self) -> float:
        if not self.is_nonnegative():
            raise GiniDomainError(f"{self.label} takes negative values; its Gini coefficient is undefined")
        mu = self.mean()
        if not mu > 0.0:
            raise GiniDomainError(f"{self.label} has no positive finite mean")
        return mu

    def require_finite_mean(self) -> float:
        mu = self.mean()
        if not math.isfinite(mu):
            raise GiniDomainError(f"{self.label} has an infinite mean")
        return mu


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise GiniDomainError(f"probability must lie in (0, 1), got {p}")


@dataclass(frozen=True)
class TwoPoint(ParametricDistribution):
    """Value ``x`` with probability ``1 - p`` and ``y`` with probability ``p``."""

    x: float
    y: float
    p: float
    family: ClassVar[str] = "twopoint"
    is_continuous: ClassVar[bool] = False

    def __post_init__(self) -> None:
        if not self.x < self.y:
            raise GiniDomainError(f"two-point law needs x < y, got x={self.x}, y={self.y}")
        _check_probability(self.p)

    def _quantile(self, t: FloatArray) -> FloatArray:
        return np.where(t <= 1.0 - self.p, self.x, self.y)

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        return np.where(u >= self.p, self.x, self.y)

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return np.where(x_arr < self.x, 0.0, np.where(x_arr < self.y, 1.0 - self.p, 1.0))

    def mean(self) -> float:
        return self.x * (1.0 - self.p) + self.y * self.p

    def variance(self) -> float:
        return (self.y - self.x) ** 2 * self.p * (1.0 - self.p)

    def is_nonnegative(self) -> bool:
        return self.x >= 0.0

    @property
    def label(self) -> str:
        return f"{self.family}:{self.x:g},{self.y:g},{self.p:g}"

    def closed_form_gd(self, n: int) -> float:
        return (self.y - self.x) * float(DistortionFunction.canonical(n)(self.p)[0])

    def as_step(self) -> StepQuantile:
        return StepQuantile([0.0, 1.0 - self.p, 1.0], [self.x, self.y])


@dataclass(frozen=True)
class Bernoulli(TwoPoint):
    x: float = field(default=0.0, init=False)
    y: float = field(default=1.0, init=False)
    p: float = 0.5
    family: ClassVar[str] = "bernoulli"

    @property
    def label(self) -> str:
        return f"{self.family}:{self.p:g}"

    def closed_form_gc(self, n: int) -> float:
        # GC_n = GD_n / mean, and the mean is p
        return self.closed_form_gd(n) / self.p


@dataclass(frozen=True)
class Exponential(ParametricDistribution):
    rate: float = 1.0
    family: ClassVar[str] = "exponential"

    def __post_init__(self) -> None:
        if not self.rate > 0.0:
            raise GiniDomainError(f"exponential rate must be positive, got {self.rate}")

    def _quantile(self, t: FloatArray) -> FloatArray:
        return -np.log1p(-t) / self.rate

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        return -np.log(u) / self.rate

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return np.where(x_arr <= 0.0, 0.0, -np.expm1(-self.rate * np.maximum(x_arr, 0.0)))

    def survival(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return np.exp(-self.rate * np.maximum(x_arr, 0.0))

    def density(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return np.where(x_arr < 0.0, 0.0, self.rate * np.exp(-self.rate * np.maximum(x_arr, 0.0)))

    def mean(self) -> float:
        return 1.0 / self.rate

    def variance(self) -> float:
        return 1.0 / self.rate**2

    def is_nonnegative(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"{self.family}:{self.rate:g}"

    def closed_form_gd(self, n: int) -> float:
        return sf.harmonic_number(n - 1) / (n * self.rate)

    def closed_form_gc(self, n: int) -> float:
        return sf.harmonic_number(n - 1) / n


@dataclass(frozen=True)
class Pareto(ParametricDistribution):
    alpha: float
    scale: float = 1.0
    family: ClassVar[str] = "pareto"

    def __post_init__(self) -> None:
        if not self.alpha > 0.0 or not self.scale > 0.0:
            raise GiniDomainError(
                f"Pareto needs positive shape and scale, got alpha={self.alpha}, x_m={self.scale}"
            )

    def _quantile(self, t: FloatArray) -> FloatArray:
        return self.scale * np.exp(-np.log1p(-t) / self.alpha)

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        return self.scale * np.exp(-np.log(u) / self.alpha)

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        safe = np.maximum(x_arr, self.scale)
        return np.where(x_arr < self.scale, 0.0, -np.expm1(self.alpha * np.log(self.scale / safe)))

    def survival(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        safe = np.maximum(x_arr, self.scale)
        return np.exp(self.alpha * np.log(self.scale / safe))

    def density(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        safe = np.maximum(x_arr, self.scale)
        return np.where(
            x_arr < self.scale, 0.0, self.alpha / safe * np.exp(self.alpha * np.log(self.scale / safe))
        )

    def mean(self) -> float:
        if self.alpha <= 1.0:
            return math.inf
        return self.alpha * self.scale / (self.alpha - 1.0)

    def variance(self) -> float:
        if self.alpha <= 2.0:
            return math.inf
        return self.alpha * self.scale**2 / ((self.alpha - 1.0) ** 2 * (self.alpha - 2.0))

    def is_nonnegative(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"{self.family}:{self.alpha:g},{self.scale:g}"

    def _shape_term(self, n: int) -> float:
        if self.alpha <= 1.0:
            raise GiniDomainError(f"Pareto with alpha={self.alpha} <= 1 has an infinite mean")
        inv = 1.0 / self.alpha
        return sf.beta_function(n, 1.0 - inv) - 1.0 / (n - inv)

    def closed_form_gd(self, n: int) -> float:
        return self.scale * self._shape_term(n)

    def closed_form_gc(self, n: int) -> float:
        return (self.alpha - 1.0) / self.alpha * self._shape_term(n)


@dataclass(frozen=True)
class LogNormal(ParametricDistribution):
    mu: float = 0.0
    sigma: float = 1.0
    family: ClassVar[str] = "lognormal"

    def __post_init__(self) -> None:
        if not self.sigma > 0.0 or not math.isfinite(self.mu):
            raise GiniDomainError(f"log-normal needs finite mu and sigma > 0, got ({self.mu}, {self.sigma})")

    def _quantile(self, t: FloatArray) -> FloatArray:
        return np.exp(self.mu + self.sigma * sf.normal_quantile(t))

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        return np.exp(self.mu - self.sigma * sf.normal_quantile(u))

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        with np.errstate(divide="ignore"):
            z = (np.log(np.maximum(x_arr, 0.0)) - self.mu) / self.sigma
        return sf.normal_cdf(z)

    def survival(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        with np.errstate(divide="ignore"):
            z = (np.log(np.maximum(x_arr, 0.0)) - self.mu) / self.sigma
        return sf.normal_cdf(-z)

    def density(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.zeros_like(x_arr)
        positive = x_arr > 0.0
        z = (np.log(x_arr[positive]) - self.mu) / self.sigma
        out[positive] = np.exp(-0.5 * z * z) / (x_arr[positive] * self.sigma * math.sqrt(2.0 * math.pi))
        return out

    def mean(self) -> float:
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def variance(self) -> float:
        return math.expm1(self.sigma**2) * math.exp(2.0 * self.mu + self.sigma**2)

    def is_nonnegative(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"{self.family}:{self.mu:g},{self.sigma:g}"


@dataclass(frozen=True)
class Beta(ParametricDistribution):
    a: float
    b: float
    tolerances: SpecialFunctionTolerances = field(
        default_factory=SpecialFunctionTolerances, compare=False, repr=False
    )
    family: ClassVar[str] = "beta"

    def __post_init__(self) -> None:
        if not self.a > 0.0 or not self.b > 0.0:
            raise GiniDomainError(f"Beta needs positive shapes, got ({self.a}, {self.b})")

    def _quantile(self, t: FloatArray) -> FloatArray:
        return sf.inverse_regularized_beta(t, self.a, self.b, self.tolerances)

    def _upper_quantile(self, u: FloatArray) -> FloatArray:
        # I_x(a, b) = 1 - I_{1-x}(b, a)
        return 1.0 - sf.inverse_regularized_beta(u, self.b, self.a, self.tolerances)

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return sf.regularized_beta(np.clip(x_arr, 0.0, 1.0), self.a, self.b)

    def survival(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return sf.regularized_beta(np.clip(1.0 - x_arr, 0.0, 1.0), self.b, self.a)

    def density(self, x: npt.ArrayLike) -> FloatArray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        inside = (x_arr > 0.0) & (x_arr < 1.0)
        out = np.zeros_like(x_arr)
        out[inside] = sf.beta_density(x_arr[inside], self.a, self.b)
        return out

    def mean(self) -> float:
        return self.a / (self.a + self.b)

    def variance(self) -> float:
        total = self.a + self.b
        return self.a * self.b / (total**2 * (total + 1.0))

    def is_nonnegative(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return f"{self.family}:{self.a:g},{self.b:g}"


_ARITY: dict[str, tuple[int, ...]] = {
    "bernoulli": (1,),
    "twopoint": (3,),
    "beta": (2,),
    "lognormal": (2,),
    "exponential": (1,),
    "pareto": (1, 2),
}


def parse_distribution(
    text: str, tolerances: SpecialFunctionTolerances | None = None
) -> ParametricDistribution:
    """Parse ``family:p1[,p2[,p3]]``, e.g. ``pareto:3,2`` or ``lognormal:0,1``."""
    family, sep, raw = text.strip().partition(":")
    family = family.strip().lower()
    if family not in _ARITY:
        known = ", ".join(sorted(_ARITY))
        raise GiniDomainError(f"unknown distribution family {family!r}; expected one of {known}")
    if not sep or not raw.strip():
        raise GiniDomainError(f"distribution {text!r} is missing its parameters")
    try:
        params = [float(part) for part in raw.split(",")]
    except ValueError:
        raise GiniDomainError(f"distribution parameters in {text!r} must be numbers")
    if len(params) not in _ARITY[family]:
        raise GiniDomainError(
            f"{family} takes {' or '.join(map(str, _ARITY[family]))} parameters, got {len(params)}"
        )
    if not all(math.isfinite(p) for p in params):
        raise GiniDomainError(f"distribution parameters in {text!r} must be finite")
    match family:
        case "bernoulli":
            return Bernoulli(p=params[0])
        case "twopoint":
            return TwoPoint(*params)
        case "beta":
            return Beta(params[0], params[1], tolerances or SpecialFunctionTolerances())
        case "lognormal":
            return LogNormal(*params)
        case "exponential":
            return Exponential(params[0])
        case _:
            return Pareto(*params)
