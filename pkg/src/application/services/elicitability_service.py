"""Empirical risk minimization and comparative backtests for the n-observation scores."""

import logging
import math

import numpy as np
from scipy import optimize, stats

from ...domain.entities.observation_tuple import TupleSet
from ...domain.entities.parametric_distribution import ParametricDistribution
from ...domain.exceptions import ConvergenceError, GiniDomainError
from ...domain.services import gini_core, scoring
from ...domain.value_objects.distortion_function import canonical_survival_expansion
from ...domain.value_objects.gini_order import GiniOrder
from ...domain.value_objects.quadrature_settings import QuadratureSettings
from ...domain.value_objects.score_variant import ScoreKind, ScoreVariant
from ..dto.reports import BacktestReport, ErmReport, ReducedOrderReport

logger = logging.getLogger(__name__)

NORMAL_CRITICAL_MIN_TUPLES = 30
SEARCH_AGREEMENT = 1e-7


def gd_score_coefficients(n: int, observations: int | None = None) -> tuple[float, ...]:
    """Coefficients ``a_1..a_k`` of the polynomial score whose minimizer is ``GD_n``.

    They are the coefficients of ``h_n`` in powers of ``1 - t``; ``E[max of i draws]``
    integrates ``q`` against ``d(t**i)``, so ``-E[sum_i a_i max_i] = GD_n``.
    """
    order = GiniOrder(n)
    expansion = canonical_survival_expansion(order)
    k = order if observations is None else observations
    if any(b != 0 for b in expansion[k:]):
        raise GiniDomainError(f"GD_{order} needs {order} observations per tuple, not {k}")
    return tuple(float(b) for b in expansion[:k])


class ElicitabilityService:
    def __init__(self, quadrature: QuadratureSettings) -> None:
        self.quadrature = quadrature

    def score(self, variant: ScoreVariant, x: float, tuples: TupleSet) -> float:
        return scoring.mean_score(variant, x, tuples)

    def erm_minimize(self, variant: ScoreVariant, tuples: TupleSet) -> float:
        """Exact minimizer of the mean score, cross-checked by a bounded search."""
        exact, _ = self._verified_minimizer(variant, tuples)
        return exact

    def erm_report(self, variant: ScoreVariant, tuples: TupleSet) -> ErmReport:
        exact, found = self._verified_minimizer(variant, tuples)
        std_error = scoring.minimizer_std_error(variant, tuples)
        return ErmReport(
            variant=variant.label,
            n=variant.order,
            tuples=tuples.count,
            minimizer=exact,
            search_minimizer=found,
            std_error=None if math.isnan(std_error) else std_error,
        )

    def _verified_minimizer(self, variant: ScoreVariant, tuples: TupleSet) -> tuple[float, float]:
        exact = scoring.exact_minimizer(variant, tuples)
        found = self._search_minimizer(variant, tuples, exact)
        if abs(found - exact) > SEARCH_AGREEMENT * (1.0 + abs(exact)):
            raise ConvergenceError(
                f"{variant.label}: bracketed search found {found:.12g}, closed form {exact:.12g}"
            )
        return exact, found

    def _search_minimizer(self, variant: ScoreVariant, tuples: TupleSet, centre: float) -> float:
        if variant.kind is ScoreKind.POLY:
            reach = float(np.max(np.abs(scoring.poly_statistic(variant, tuples))))
        else:
            reach = float(np.max(tuples.spreads))
        lo, hi = centre - 1.0 - reach, centre + 1.0 + reach
        result = optimize.minimize_scalar(
            lambda x: scoring.mean_score(variant, x, tuples),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12 * (hi - lo)},
        )
        logger.debug("%s search on [%.6g, %.6g]: %.12g", variant.label, lo, hi, result.x)
        return float(result.x)

    def check_n_minus_1_elicitability(
        self, n: int, tuples: TupleSet, distribution: ParametricDistribution | None = None
    ) -> ReducedOrderReport:
        """``GD_n`` for odd ``n`` from tuples of ``n - 1`` observations.

        The top coefficient of ``h_n`` in powers of ``1 - t`` vanishes for odd
        ``n``, so the polynomial score needs only ``n - 1`` running maxima.
        """
        order = GiniOrder(n)
        if not order.is_odd:
            raise GiniDomainError(f"the reduced-order construction needs odd n, got {order}")
        top = canonical_survival_expansion(order)[-1]
        coefficients = gd_score_coefficients(order, order - 1)
        variant = ScoreVariant.poly(coefficients)
        minimizer = self.erm_minimize(variant, tuples)
        std_error = scoring.minimizer_std_error(variant, tuples)
        target = None
        if distribution is not None:
            target = gini_core.gd_parametric(distribution, order, self.quadrature)
        return ReducedOrderReport(
            n=order,
            observations=order - 1,
            coefficients=list(coefficients),
            top_coefficient=float(top),
            minimizer=minimizer,
            std_error=None if math.isnan(std_error) else std_error,
            target=target,
        )

    def comparative_backtest(
        self, variant: ScoreVariant, forecast_a: float, forecast_b: float, tuples: TupleSet
    ) -> BacktestReport:
        """Paired comparison of two forecasts; a negative mean difference favours ``forecast_a``."""
        if tuples.count < 2:
            raise GiniDomainError(f"a backtest needs at least 2 tuples, got {tuples.count}")
        count = tuples.count
        score_a = scoring.scores(variant, forecast_a, tuples)
        score_b = scoring.scores(variant, forecast_b, tuples)
        differences = score_a - score_b
        mean_diff = math.fsum(differences) / count
        spread = float(np.std(differences, ddof=1))

        t_statistic = p_value = None
        degenerate = spread == 0.0
        if degenerate:
            logger.warning("backtest of %s: every score difference equals %.6g", variant.label, mean_diff)
        else:
            t_statistic = mean_diff / (spread / math.sqrt(count))
            if count >= NORMAL_CRITICAL_MIN_TUPLES:
                p_value = float(2.0 * stats.norm.sf(abs(t_statistic)))
            else:
                p_value = float(2.0 * stats.t.sf(abs(t_statistic), df=count - 1))
        return BacktestReport(
            variant=variant.label,
            n=variant.order,
            forecast_a=forecast_a,
            forecast_b=forecast_b,
            mean_score_a=math.fsum(score_a) / count,
            mean_score_b=math.fsum(score_b) / count,
            mean_diff=mean_diff,
            t_statistic=t_statistic,
            p_value=p_value,
            degenerate=degenerate,
            tuples=count,
        )
