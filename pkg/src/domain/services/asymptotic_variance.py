"""Asymptotic variance of the L-statistic estimators of GD_n and GC_n.

The variance is the double integral of ``g(s) g(t) (min(s, t) - s t)`` against
``1 / (f(q(s)) f(q(t)))``. Changing variables to ``x = q(s)``, ``y = q(t)``
removes the density and leaves

    sigma^2 = 2 * integral_{x < y} g(F(x)) F(x) g(F(y)) (1 - F(y)) dx dy

on the support truncated to ``[q(delta), q(1 - delta)]``. ``g`` is ``phi_n``
for the deviation and ``phi_n - GC_n`` for the coefficient.
"""

import logging
import math

import numpy as np
import numpy.typing as npt

from ..entities.parametric_distribution import Pareto, ParametricDistribution
from ..exceptions import AssumptionViolatedError, ConvergenceError
from ..value_objects.gini_order import GiniOrder
from ..value_objects.quadrature_settings import QuadratureSettings, VarianceSettings
from . import gini_core
from .quadrature import gauss_legendre, panel_nodes

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def check_admissible(distribution: ParametricDistribution) -> None:
    if not distribution.is_continuous:
        raise AssumptionViolatedError(
            f"{distribution.label} is discrete; the asymptotic variance needs a positive density"
        )
    if isinstance(distribution, Pareto) and distribution.alpha <= 2.0:
        raise AssumptionViolatedError(
            f"{distribution.label} lacks a finite second moment; the variance formula does not apply"
        )


def _support_breakpoints(distribution: ParametricDistribution, delta: float, panels: int) -> FloatArray:
    s = np.geomspace(delta, 0.5, panels + 1)
    lower = distribution.quantile(s)
    upper = distribution.upper_quantile(s[:-1])[::-1]
    return np.unique(np.concatenate((lower, upper)))


def truncated_variance(
    distribution: ParametricDistribution,
    n: int,
    centre: float,
    delta: float,
    settings: VarianceSettings,
    swap_order: bool = False,
) -> float:
    """The truncated double integral at a fixed ``delta``.

    ``swap_order`` integrates the inner variable from the top instead,
    ``2 * integral g(F(x)) F(x) H(x) dx`` with ``H(x) = integral_x^hi g (1 - F)``.
    """
    breakpoints = _support_breakpoints(distribution, delta, settings.panels)
    x, w = panel_nodes(breakpoints, settings.nodes)

    def weight(points: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
        cdf = distribution.cdf(points.ravel()).reshape(points.shape)
        survival = distribution.survival(points.ravel()).reshape(points.shape)
        return gini_core.phi(n, cdf, survival) - centre, cdf, survival

    g, cdf, survival = weight(x)
    inner_factor = g * (survival if swap_order else cdf)
    outer_factor = g * (cdf if swap_order else survival)
    panel_integrals = np.sum(inner_factor * w, axis=1)

    xi, omega = gauss_legendre(settings.nodes)
    if swap_order:
        # H at node y: rest of own panel [y, b_p] plus every later panel.
        after = np.concatenate((np.cumsum(panel_integrals[::-1])[::-1][1:], [0.0]))
        start, stop = x, breakpoints[1:, None] * np.ones_like(x)
    else:
        after = np.concatenate(([0.0], np.cumsum(panel_integrals)[:-1]))
        start, stop = breakpoints[:-1, None] * np.ones_like(x), x
    half = 0.5 * (stop - start)
    z = start[..., None] + half[..., None] * (xi + 1.0)
    gz, cz, sz = weight(z)
    partial = np.sum(gz * (sz if swap_order else cz) * omega, axis=2) * half
    cumulative = after[:, None] + partial
    return 2.0 * float(np.sum(outer_factor * cumulative * w))


def _aitken(a: float, b: float, c: float) -> float:
    denominator = (c - b) - (b - a)
    if denominator == 0.0:
        return c
    return c - (c - b) ** 2 / denominator


def variance_by_halving(
    distribution: ParametricDistribution,
    n: int,
    centre: float,
    settings: VarianceSettings,
) -> tuple[float, float, bool]:
    """Halve ``delta`` until the truncated integral settles.

    Returns (value, final delta, extrapolated). When the floor is reached first,
    the last three iterates are Aitken-extrapolated and accepted if the final
    relative change is below ``accept_tol``.
    """
    delta = settings.initial_delta
    history = [truncated_variance(distribution, n, centre, delta, settings)]
    change = math.inf
    while delta / 2.0 >= settings.floor_delta:
        delta /= 2.0
        history.append(truncated_variance(distribution, n, centre, delta, settings))
        change = abs(history[-1] - history[-2]) / max(abs(history[-1]), np.finfo(float).tiny)
        logger.debug("variance delta=%.3g value=%.10g change=%.3g", delta, history[-1], change)
        if change < settings.rel_tol:
            return history[-1], delta, False
    if change < settings.accept_tol and len(history) >= 3:
        value = _aitken(*history[-3:])
        logger.warning(
            "variance for %s, n=%d reached delta floor with change %.2g; Aitken value %.8g accepted",
            distribution.label, n, change, value,
        )
        return value, delta, True
    raise ConvergenceError(
        f"asymptotic variance for {distribution.label}, n={n} changed by {change:.3g} "
        f"relative at delta={delta:.3g}"
    )


def asymptotic_variance_gd(
    distribution: ParametricDistribution, n: int, settings: VarianceSettings | None = None
) -> float:
    order = GiniOrder(n)
    check_admissible(distribution)
    value, _, _ = variance_by_halving(distribution, order, 0.0, settings or VarianceSettings())
    return max(value, 0.0)


def asymptotic_variance_gc(
    distribution: ParametricDistribution,
    n: int,
    settings: VarianceSettings | None = None,
    quadrature: QuadratureSettings | None = None,
) -> float:
    order = GiniOrder(n)
    check_admissible(distribution)
    mu = distribution.positive_mean()
    coefficient = gini_core.gc_parametric(distribution, order, quadrature)
    value, _, _ = variance_by_halving(distribution, order, coefficient, settings or VarianceSettings())
    return max(value, 0.0) / mu**2
