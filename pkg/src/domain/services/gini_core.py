"""Higher-order Gini deviations and coefficients over quantile functions.

``GD_n(X) = integral_0^1 q(t) phi_n(t) dt`` with
``phi_n(t) = t**(n-1) - (1-t)**(n-1)``. On a step quantile the integral is
summed exactly through ``Phi_n(t) = (t**n + (1-t)**n) / n``; parametric
quantiles use their closed form when one exists and adaptive quadrature
otherwise.
"""

import itertools
import logging
import math

import numpy as np
import numpy.typing as npt

from ..entities.parametric_distribution import ParametricDistribution
from ..entities.quantile_function import ParametricQuantile, QuantileFunction, StepQuantile
from ..exceptions import GiniDomainError
from ..value_objects.distortion_function import DistortionFunction
from ..value_objects.gini_combination import GiniCombination
from ..value_objects.gini_order import GiniOrder
from ..value_objects.quadrature_settings import QuadratureSettings
from .quadrature import integrate_unit
from .special_functions import stable_power

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def distortion_h(n: int, t: npt.ArrayLike) -> float | FloatArray:
    """``h_n(t) = (1 - t**n - (1-t)**n) / n``, exact at both endpoints."""
    order = GiniOrder(n)
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any((t_arr < 0.0) | (t_arr > 1.0)) or np.any(np.isnan(t_arr)):
        raise GiniDomainError("distortion argument must lie in [0, 1]")
    values = DistortionFunction.canonical(order)(t_arr)
    if t_arr.ndim == 0:
        return float(values[0])
    return values


def phi(n: int, t: npt.ArrayLike, u: npt.ArrayLike | None = None) -> FloatArray:
    """``phi_n(t) = t**(n-1) - (1-t)**(n-1)``; pass ``u = 1 - t`` when it is known exactly."""
    t_arr = np.asarray(t, dtype=np.float64)
    u_arr = 1.0 - t_arr if u is None else np.asarray(u, dtype=np.float64)
    return stable_power(t_arr, n - 1) - stable_power(u_arr, n - 1)


def phi_antiderivative(n: int, t: npt.ArrayLike) -> FloatArray:
    t_arr = np.asarray(t, dtype=np.float64)
    return (stable_power(t_arr, n) + stable_power(1.0 - t_arr, n)) / n


def _step_gd(q: StepQuantile, n: int) -> float:
    increments = np.diff(phi_antiderivative(n, q.breakpoints))
    return math.fsum(q.levels * increments)


def _quadrature_gd(
    distribution: ParametricDistribution, n: int, settings: QuadratureSettings | None
) -> float:
    distribution.require_finite_mean()

    def integrand(t: FloatArray, u: FloatArray) -> FloatArray:
        return distribution.quantile_split(t, u) * phi(n, t, u)

    return integrate_unit(integrand, settings)


def gd_n(q: QuantileFunction, n: int, settings: QuadratureSettings | None = None) -> float:
    order = GiniOrder(n)
    if isinstance(q, StepQuantile):
        return max(_step_gd(q, order), 0.0)
    if isinstance(q, ParametricQuantile):
        return gd_parametric(q.distribution, order, settings)
    raise GiniDomainError(f"unsupported quantile function {type(q).__name__}")


def gd_parametric(
    distribution: ParametricDistribution,
    n: int,
    settings: QuadratureSettings | None = None,
    prefer_closed_form: bool = True,
) -> float:
    order = GiniOrder(n)
    step = distribution.as_step()
    if step is not None:
        return max(_step_gd(step, order), 0.0)
    if prefer_closed_form:
        closed = distribution.closed_form_gd(order)
        if closed is not None:
            return closed
    return _quadrature_gd(distribution, order, settings)


def gc_n(q: QuantileFunction, n: int, settings: QuadratureSettings | None = None) -> float:
    order = GiniOrder(n)
    if isinstance(q, ParametricQuantile):
        return gc_parametric(q.distribution, order, settings)
    mu = _positive_mean(q)
    ratio = gd_n(q, order, settings) / mu
    if ratio >= 1.0:
        raise GiniDomainError(
            f"GC_{order} rounds to {ratio!r}; the top atom is too small to resolve in double precision"
        )
    return ratio


def gc_parametric(
    distribution: ParametricDistribution,
    n: int,
    settings: QuadratureSettings | None = None,
    prefer_closed_form: bool = True,
) -> float:
    order = GiniOrder(n)
    if prefer_closed_form:
        closed = distribution.closed_form_gc(order)
        if closed is not None:
            return closed
    mu = distribution.positive_mean()
    return gd_parametric(distribution, order, settings, prefer_closed_form) / mu


def _positive_mean(q: QuantileFunction) -> float:
    if not q.is_nonnegative():
        raise GiniDomainError("Gini coefficient needs a nonnegative quantile")
    mu = q.mean()
    if not mu > 0.0:
        raise GiniDomainError("Gini coefficient needs a positive mean")
    return mu


def gd_combination(
    q: QuantileFunction, w: GiniCombination, settings: QuadratureSettings | None = None
) -> float:
    return math.fsum(weight * gd_n(q, order, settings) for weight, order in w.terms())


def lorenz(q: QuantileFunction, p: npt.ArrayLike, settings: QuadratureSettings | None = None) -> float | FloatArray:
    """``L(p)``: the share of the total held by the poorest fraction ``p``."""
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise GiniDomainError("Lorenz argument must lie in [0, 1]")
    if isinstance(q, StepQuantile):
        values = q.lorenz(p_arr)
    else:
        mu = _positive_mean(q)
        values = np.array([_parametric_partial(q, float(x), settings) / mu for x in np.atleast_1d(p_arr)])
    if p_arr.ndim == 0:
        return float(values[0])
    return values


def _parametric_partial(q: QuantileFunction, p: float, settings: QuadratureSettings | None) -> float:
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return q.mean()
    distribution = _distribution_of(q)

    # integral_0^p q(t) dt = p * integral_0^1 q(p s) ds; the substitution keeps the
    # lower tail graded at s = 0 and the integrand smooth at s = 1.
    def integrand(s: FloatArray, _u: FloatArray) -> FloatArray:
        x = p * s
        return p * distribution.quantile_split(x, 1.0 - x)

    return integrate_unit(integrand, settings)


def _distribution_of(q: QuantileFunction) -> ParametricDistribution:
    if not isinstance(q, ParametricQuantile):
        raise GiniDomainError(f"unsupported quantile function {type(q).__name__}")
    return q.distribution


def power_distortion(q: QuantileFunction, n: int, settings: QuadratureSettings | None = None) -> float:
    """``rho_n(X) = integral_0^1 n t**(n-1) q(t) dt``, the mean of the maximum of n draws."""
    if n < 1:
        raise GiniDomainError(f"power distortion needs n >= 1, got {n}")
    if isinstance(q, StepQuantile):
        return math.fsum(q.levels * np.diff(stable_power(q.breakpoints, n)))
    distribution = _distribution_of(q)

    def integrand(t: FloatArray, u: FloatArray) -> FloatArray:
        return n * stable_power(t, n - 1) * distribution.quantile_split(t, u)

    return integrate_unit(integrand, settings)


def _reflected_power_distortion(q: QuantileFunction, n: int, settings: QuadratureSettings | None) -> float:
    if isinstance(q, StepQuantile):
        return power_distortion(q.reflect(), n)
    distribution = _distribution_of(q)

    # rho_n(-X) = -integral_0^1 n (1-t)**(n-1) q(t) dt
    def integrand(t: FloatArray, u: FloatArray) -> FloatArray:
        return -n * stable_power(u, n - 1) * distribution.quantile_split(t, u)

    return integrate_unit(integrand, settings)


def gd_n_from_power(q: QuantileFunction, n: int, settings: QuadratureSettings | None = None) -> float:
    """``GD_n = (rho_n(X) + rho_n(-X)) / n``."""
    order = GiniOrder(n)
    return (power_distortion(q, order, settings) + _reflected_power_distortion(q, order, settings)) / order


def choquet_integral(q: StepQuantile, h: DistortionFunction) -> float:
    """Signed Choquet integral of a step quantile under the distortion ``h``.

    Between consecutive levels ``v_j < v_{j+1}`` the survival probability is
    ``1 - t_j``, so the integral is ``v_1 h(1) + sum_j (v_{j+1} - v_j) h(1 - t_j)``.
    """
    levels = q.levels
    survival = 1.0 - q.breakpoints[1:-1]
    gaps = np.diff(levels)
    return math.fsum([levels[0] * h.at_one(), *(gaps * h(survival))])


def gc_from_lorenz(q: QuantileFunction, settings: QuadratureSettings | None = None) -> float:
    """Classical Gini coefficient as ``1 - 2 integral_0^1 L(p) dp``."""
    if isinstance(q, StepQuantile):
        return 1.0 - 2.0 * q.lorenz_area()
    distribution = _distribution_of(q)
    mu = distribution.positive_mean()

    # integral_0^1 L(p) dp = integral_0^1 (1 - t) q(t) dt / mu
    def integrand(t: FloatArray, u: FloatArray) -> FloatArray:
        return u * distribution.quantile_split(t, u)

    return 1.0 - 2.0 * integrate_unit(integrand, settings) / mu


def gd_n_enumerated(q: StepQuantile, n: int) -> float:
    """``(1/n) E[max - min]`` over n iid draws by exhaustive enumeration of level tuples."""
    order = GiniOrder(n)
    levels = q.levels.tolist()
    masses = q.masses.tolist()
    terms = []
    for combo in itertools.product(range(len(levels)), repeat=order):
        values = [levels[i] for i in combo]
        terms.append(math.prod(masses[i] for i in combo) * (max(values) - min(values)))
    return math.fsum(terms) / order


def gd_n_cov_oracle(
    distribution: ParametricDistribution, n: int, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo ``Cov(X, phi_n(U))`` with ``X = q(U)``; returns (estimate, standard error)."""
    order = GiniOrder(n)
    if samples < 2:
        raise GiniDomainError(f"the covariance oracle needs at least 2 samples, got {samples}")
    if seed < 0:
        raise GiniDomainError(f"seed must be nonnegative, got {seed}")
    distribution.require_finite_mean()
    rng = np.random.default_rng(seed)
    u = rng.random(samples)
    x = distribution.quantile_split(u, 1.0 - u)
    weights = phi(order, u, 1.0 - u)
    products = (x - x.mean()) * (weights - weights.mean())
    estimate = float(products.sum() / (samples - 1))
    std_error = float(products.std(ddof=1) / math.sqrt(samples))
    logger.debug("covariance oracle n=%d samples=%d: %.6g +/- %.2g", order, samples, estimate, std_error)
    return estimate, std_error
