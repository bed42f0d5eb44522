"""Special-function numerics shared by the distribution catalog and the bounds.

Log-gamma, the Beta function, the regularized incomplete Beta function and the
normal quantile come from :mod:`scipy.special`; this module adds the guarded
power, the integer Gamma recursion for ``B(n, b)`` and a bracketed Newton
polish of the inverse incomplete Beta that honours an iteration budget.
"""

import logging
import math
from fractions import Fraction

import numpy as np
import numpy.typing as npt
from scipy import special

from ..exceptions import ConvergenceError, GiniDomainError
from ..value_objects.special_function_tolerances import SpecialFunctionTolerances

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Above this the product form of B(n, b) stops being cheaper than log-gamma.
_INTEGER_RECURSION_LIMIT = 1000


def stable_power(t: npt.ArrayLike, n: float) -> FloatArray:
    """``t**n`` as ``exp(n log t)`` with exact values at ``t`` in {0, 1}."""
    t_arr = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t_arr)
    inside = (t_arr > 0.0) & (t_arr < 1.0)
    with np.errstate(divide="ignore", under="ignore"):
        out[inside] = np.exp(n * np.log(t_arr[inside]))
    out[t_arr == 1.0] = 1.0
    other = ~inside & (t_arr != 0.0) & (t_arr != 1.0)
    if np.any(other):
        out[other] = np.power(t_arr[other], n)
    return out


def log_beta(a: float, b: float) -> float:
    return float(special.betaln(a, b))


def beta_function(a: float, b: float) -> float:
    """``B(a, b)``, using ``B(n, b) = (n-1)! / (b (b+1) ... (b+n-1))`` for integer ``a``."""
    if a <= 0 or b <= 0:
        raise GiniDomainError(f"Beta function needs positive arguments, got ({a}, {b})")
    if float(a).is_integer() and a <= _INTEGER_RECURSION_LIMIT:
        k = np.arange(1, int(a), dtype=np.float64)
        return float(np.prod(k / (b + k)) / b)
    return math.exp(log_beta(a, b))


def harmonic_number(m: int) -> float:
    return math.fsum(1.0 / k for k in range(1, m + 1))


def factorial_ratio(n: int) -> float:
    """``2((n-1)!)^2 / (2n-1)!`` through log-gamma."""
    return math.exp(2.0 * math.lgamma(n) - math.lgamma(2 * n) + math.log(2.0))


def factorial_ratio_exact(n: int) -> Fraction:
    return Fraction(2 * math.factorial(n - 1) ** 2, math.factorial(2 * n - 1))


def normal_quantile(t: npt.ArrayLike) -> FloatArray:
    return np.asarray(special.ndtri(t), dtype=np.float64)


def normal_cdf(x: npt.ArrayLike) -> FloatArray:
    return np.asarray(special.ndtr(x), dtype=np.float64)


def regularized_beta(x: npt.ArrayLike, a: float, b: float) -> FloatArray:
    return np.asarray(special.betainc(a, b, x), dtype=np.float64)


def beta_density(x: npt.ArrayLike, a: float, b: float) -> FloatArray:
    x_arr = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_f = special.xlogy(a - 1.0, x_arr) + special.xlog1py(b - 1.0, -x_arr)
        return np.asarray(np.exp(log_f - log_beta(a, b)), dtype=np.float64)


def inverse_regularized_beta(
    t: npt.ArrayLike,
    a: float,
    b: float,
    tolerances: SpecialFunctionTolerances | None = None,
) -> FloatArray:
    """Solve ``I_x(a, b) = t`` for ``x`` by bisection-bracketed Newton steps.

    scipy's ``betaincinv`` seeds the iteration; the polish keeps every iterate
    inside a shrinking bracket so extreme shapes cannot send Newton astray.
    """
    tol = tolerances or SpecialFunctionTolerances()
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    lo = np.zeros_like(t_arr)
    hi = np.ones_like(t_arr)
    x = np.clip(np.asarray(special.betaincinv(a, b, t_arr), dtype=np.float64), 0.0, 1.0)
    done = (t_arr == 0.0) | (t_arr == 1.0)
    x[t_arr == 0.0] = 0.0
    x[t_arr == 1.0] = 1.0

    for iteration in range(tol.max_iterations):
        active = ~done
        if not np.any(active):
            logger.debug("inverse Beta converged after %d iterations", iteration)
            break
        xa = x[active]
        residual = regularized_beta(xa, a, b) - t_arr[active]
        small = np.abs(residual) <= tol.abs_tol
        lo_a = np.where(residual < 0.0, xa, lo[active])
        hi_a = np.where(residual > 0.0, xa, hi[active])
        density = beta_density(xa, a, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = residual / density
        candidate = xa - step
        bad = ~np.isfinite(candidate) | (candidate <= lo_a) | (candidate >= hi_a)
        candidate = np.where(bad, 0.5 * (lo_a + hi_a), candidate)
        moved = np.abs(candidate - xa)
        settled = small | (moved <= tol.rel_tol * np.maximum(np.abs(xa), tol.abs_tol))
        x[active] = np.where(small, xa, candidate)
        lo[active] = lo_a
        hi[active] = hi_a
        idx = np.flatnonzero(active)
        done[idx[settled]] = True
    else:
        if not np.all(done):
            raise ConvergenceError(
                f"inverse incomplete Beta did not converge in {tol.max_iterations} "
                f"iterations for a={a}, b={b}"
            )
    return x
