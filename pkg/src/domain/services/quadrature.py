"""Composite Gauss-Legendre integration over the unit interval.

Integrands receive both ``t`` and ``u = 1 - t`` so that quantiles with a
singularity at either end can be evaluated without cancellation. The interval
is split at 1/2 and each half is meshed geometrically toward its endpoint.
"""

import logging
from collections.abc import Callable
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from ..exceptions import IntegrationError
from ..value_objects.quadrature_settings import QuadratureSettings

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
UnitIntegrand = Callable[[FloatArray, FloatArray], FloatArray]

# Cap panels below delta reach down to delta * 1e-20 in steps of one decade.
_CAP_DECADES = 20


@lru_cache(maxsize=64)
def gauss_legendre(nodes: int) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(breakpoints: FloatArray, nodes: int) -> tuple[FloatArray, FloatArray]:
    """Map the GL rule onto every panel; returns (P, m) node and weight arrays."""
    x, w = gauss_legendre(nodes)
    lo = breakpoints[:-1, None]
    hi = breakpoints[1:, None]
    half = 0.5 * (hi - lo)
    return lo + half * (x[None, :] + 1.0), half * w[None, :]


def graded_breakpoints(delta: float, panels: int) -> FloatArray:
    """Breakpoints on [delta, 1/2] refined geometrically toward delta."""
    return np.geomspace(delta, 0.5, panels + 1)


def cap_breakpoints(delta: float) -> FloatArray:
    return np.concatenate(([0.0], np.geomspace(delta * 10.0**-_CAP_DECADES, delta, _CAP_DECADES + 1)))


def _half_integrals(
    integrand: UnitIntegrand, breakpoints: FloatArray, nodes: int
) -> tuple[float, float]:
    s, w = panel_nodes(breakpoints, nodes)
    complement = 1.0 - s
    left = integrand(s, complement)
    right = integrand(complement, s)
    values = (left + right) * w
    if not np.all(np.isfinite(values)):
        raise IntegrationError("integrand is not finite on the quadrature mesh")
    return float(np.sum(values)), float(np.sum(np.abs(left * w)) + np.sum(np.abs(right * w)))


def integrate_unit(integrand: UnitIntegrand, settings: QuadratureSettings | None = None) -> float:
    """Integral of ``integrand(t, 1 - t)`` over (0, 1).

    The graded mesh on [delta, 1 - delta] doubles its panel count until two
    successive results agree to ``rel_tol`` relative to the integral of the
    absolute integrand; the end caps are added once.
    """
    cfg = settings or QuadratureSettings()
    cap, _ = _half_integrals(integrand, cap_breakpoints(cfg.delta), cfg.nodes)

    panels = cfg.initial_panels
    previous, _ = _half_integrals(integrand, graded_breakpoints(cfg.delta, panels), cfg.nodes)
    for _doubling in range(cfg.max_doublings):
        panels *= 2
        current, magnitude = _half_integrals(
            integrand, graded_breakpoints(cfg.delta, panels), cfg.nodes
        )
        change = abs(current - previous)
        if change <= cfg.rel_tol * max(magnitude, np.finfo(float).tiny):
            logger.debug("quadrature converged with %d panels per half", panels)
            return current + cap
        previous = current
    raise IntegrationError(
        f"quadrature did not reach relative tolerance {cfg.rel_tol:g} "
        f"after {cfg.max_doublings} panel doublings (last change {change:.3g})"
    )
