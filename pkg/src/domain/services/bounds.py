"""Sharp bounds relating higher-order Gini deviations to each other and to the SD."""

import logging
import math
from collections.abc import Callable
from fractions import Fraction

import numpy as np
from scipy import optimize

from ..entities.quantile_function import QuantileFunction, StepQuantile
from ..exceptions import GiniDomainError
from ..value_objects.distortion_function import DistortionFunction
from ..value_objects.gini_order import GiniOrder
from ..value_objects.quadrature_settings import QuadratureSettings
from ..value_objects.ratio_bound import RatioBound
from . import gini_core
from .special_functions import factorial_ratio, factorial_ratio_exact

logger = logging.getLogger(__name__)

EXACT_SD_BOUND_LIMIT = 20
_EDGE_DECADES = np.logspace(-9.0, -1.0, 81)


def sd_ratio_upper_bound(n: int) -> float:
    """Largest possible ``GD_n(X) / SD(X)``: the L2 norm of ``phi_n``."""
    order = GiniOrder(n)
    if order <= EXACT_SD_BOUND_LIMIT:
        squared = Fraction(2, 2 * order - 1) - factorial_ratio_exact(order)
        return math.sqrt(squared)
    return math.sqrt(2.0 / (2 * order - 1) - factorial_ratio(order))


def gd_ratio_lower_bound(m: int, n: int) -> float:
    return m * (1.0 - 2.0 ** (1 - n)) / (n * (1.0 - 2.0 ** (1 - m)))


def gd_ratio_bounds(m: int, n: int) -> RatioBound:
    """Range of ``GD_n / GD_m`` over nonconstant distributions, ``2 <= m <= n``.

    The lower end is attained by the fair coin; the upper end 1 is only
    approached by two-point laws with a vanishing upper mass.
    """
    low_order, high_order = GiniOrder(m), GiniOrder(n)
    if low_order > high_order:
        raise GiniDomainError(f"ratio bounds need m <= n, got m={m}, n={n}")
    lower = gd_ratio_lower_bound(low_order, high_order)
    degenerate = math.isclose(lower, 1.0, rel_tol=0.0, abs_tol=1e-15)
    return RatioBound(
        lower=1.0 if degenerate else lower,
        upper=1.0,
        lower_witness="twopoint:0,1,0.5",
        upper_witness="twopoint:0,1,0.5" if degenerate else "twopoint:0,1,p with p -> 0",
        lower_attained=True,
        upper_attained=degenerate,
    )


def _ratio_grid(grid_size: int) -> np.ndarray:
    linear = np.linspace(0.0, 1.0, grid_size)[1:-1]
    return np.unique(np.concatenate((linear, _EDGE_DECADES, 1.0 - _EDGE_DECADES, [0.5])))


def choquet_ratio_bounds(h: DistortionFunction, g: DistortionFunction, grid_size: int = 2001) -> RatioBound:
    """Bracket ``inf h/g`` and ``sup h/g`` on (0, 1).

    Scans a grid that is log-spaced toward both ends, polishes the best grid
    points with a bounded Brent search, and compares with the endpoint limits
    taken from the leading terms of each expansion.
    """
    if grid_size < 3:
        raise GiniDomainError(f"ratio grid needs at least 3 points, got {grid_size}")
    grid = _ratio_grid(grid_size)
    top, bottom = h(grid), g(grid)
    for name, values in (("h", top), ("g", bottom)):
        if np.any(values <= 0.0):
            where = float(grid[np.argmax(values <= 0.0)])
            raise GiniDomainError(f"distortion {name} is not positive at t={where:.6g}")
    ratio = top / bottom

    def scalar_ratio(t: float) -> float:
        return float(h(t)[0] / g(t)[0])

    lo_index, hi_index = int(np.argmin(ratio)), int(np.argmax(ratio))
    lower, lower_at = _polish(scalar_ratio, grid, lo_index, float(ratio[lo_index]), sign=1.0)
    upper, upper_at = _polish(scalar_ratio, grid, hi_index, float(ratio[hi_index]), sign=-1.0)
    lower_witness, upper_witness = f"t={lower_at:.6g}", f"t={upper_at:.6g}"
    lower_attained = upper_attained = True

    for limit, label in (
        (h.leading_ratio_at_zero(g), "limit t -> 0"),
        (h.leading_ratio_at_one(g), "limit t -> 1"),
    ):
        if math.isnan(limit):
            continue
        if limit < lower:
            lower, lower_witness, lower_attained = limit, label, False
        if limit > upper:
            upper, upper_witness, upper_attained = limit, label, False
    logger.debug("ratio bounds [%.12g, %.12g] from %d grid points", lower, upper, len(grid))
    return RatioBound(lower, upper, lower_witness, upper_witness, lower_attained, upper_attained)


def _polish(
    func: Callable[[float], float], grid: np.ndarray, index: int, value: float, sign: float
) -> tuple[float, float]:
    left = grid[max(index - 1, 0)]
    right = grid[min(index + 1, len(grid) - 1)]
    best_t = float(grid[index])
    if right <= left:
        return value, best_t
    result = optimize.minimize_scalar(
        lambda t: sign * func(t), bounds=(float(left), float(right)), method="bounded",
        options={"xatol": 1e-12},
    )
    candidate = sign * float(result.fun)
    if sign * candidate < sign * value:
        return candidate, float(result.x)
    return value, best_t


def sd_bound_witness(n: int, grid_size: int = 10_000) -> StepQuantile:
    """Step discretization of ``t -> phi_n(t) / ||phi_n||_2``, the SD-bound maximizer.

    Each cell carries the average of ``phi_n`` over it, so the witness has mean 0.
    """
    order = GiniOrder(n)
    if grid_size < 2:
        raise GiniDomainError(f"witness grid needs at least 2 cells, got {grid_size}")
    edges = np.arange(grid_size + 1) / grid_size
    averages = np.diff(gini_core.phi_antiderivative(order, edges)) * grid_size
    return StepQuantile(edges, averages / sd_ratio_upper_bound(order))


def monotonicity_check(
    q: QuantileFunction, n_max: int, settings: QuadratureSettings | None = None
) -> tuple[list[float], list[float] | None]:
    """``GD_n`` and, for nonnegative laws with positive mean, ``GC_n`` for ``n = 2..n_max``."""
    if n_max < 2:
        raise GiniDomainError(f"n_max must be at least 2, got {n_max}")
    orders = range(2, n_max + 1)
    deviations = [gini_core.gd_n(q, n, settings) for n in orders]
    coefficients = None
    if q.is_nonnegative() and q.mean() > 0.0:
        mu = q.mean()
        if isinstance(q, StepQuantile):
            coefficients = [gd / mu for gd in deviations]
        else:
            coefficients = [gini_core.gc_n(q, n, settings) for n in orders]
    return deviations, coefficients


def is_nonincreasing(values: list[float], tolerance: float = 1e-12) -> bool:
    return all(b <= a + tolerance * max(1.0, abs(a)) for a, b in zip(values, values[1:], strict=False))


def gc_crossing(
    a: QuantileFunction, b: QuantileFunction, n_max: int, settings: QuadratureSettings | None = None
) -> tuple[int | None, list[float], list[float]]:
    """First order at which the ``GC`` ordering seen at ``n = 2`` reverses, with both sequences."""
    if n_max < 2:
        raise GiniDomainError(f"n_max must be at least 2, got {n_max}")
    orders = list(range(2, n_max + 1))
    left = [gini_core.gc_n(a, n, settings) for n in orders]
    right = [gini_core.gc_n(b, n, settings) for n in orders]
    initial = np.sign(left[0] - right[0])
    if initial == 0.0:
        return None, left, right
    for n, x, y in zip(orders, left, right, strict=True):
        if np.sign(x - y) == -initial:
            logger.debug("GC ordering reverses at n=%d", n)
            return n, left, right
    return None, left, right
