import logging
import math
from collections.abc import Sequence

from ...domain.entities.parametric_distribution import ParametricDistribution
from ...domain.entities.quantile_function import ParametricQuantile
from ...domain.exceptions import GiniDomainError
from ...domain.services import bounds, gini_core
from ...domain.value_objects.distortion_function import DistortionFunction
from ...domain.value_objects.gini_order import GiniOrder
from ...domain.value_objects.quadrature_settings import QuadratureSettings
from ...domain.value_objects.ratio_bound import RatioBound
from ..dto.reports import MonotonicityReport, RatioBoundReport, SdBoundReport

logger = logging.getLogger(__name__)


def _report(kind: str, bound: RatioBound, m: int | None, n: int | None) -> RatioBoundReport:
    return RatioBoundReport(
        kind=kind,
        m=m,
        n=n,
        lower=bound.lower,
        upper=None if math.isinf(bound.upper) else bound.upper,
        upper_unbounded=math.isinf(bound.upper),
        lower_witness=bound.lower_witness,
        upper_witness=bound.upper_witness,
        lower_attained=bound.lower_attained,
        upper_attained=bound.upper_attained,
    )


class BoundsService:
    def __init__(self, quadrature: QuadratureSettings) -> None:
        self.quadrature = quadrature

    def sd_bound(self, n: int, grid_size: int = 10_000) -> SdBoundReport:
        """The SD bound together with the ratio reached on its discretized witness."""
        order = GiniOrder(n)
        witness = bounds.sd_bound_witness(order, grid_size)
        return SdBoundReport(
            n=order,
            bound=bounds.sd_ratio_upper_bound(order),
            grid_size=grid_size,
            witness_ratio=gini_core.gd_n(witness, order) / witness.std(),
            witness_mean=witness.mean(),
        )

    def ratio_bounds(self, m: int, n: int) -> RatioBoundReport:
        return _report("ratio", bounds.gd_ratio_bounds(m, n), m, n)

    def choquet_bounds(
        self,
        m: int | None = None,
        n: int | None = None,
        h_coefficients: Sequence[float] | None = None,
        g_coefficients: Sequence[float] | None = None,
        grid_size: int = 2001,
    ) -> RatioBoundReport:
        """Bracket ``h / g``; each side is a canonical ``h_k`` or explicit power coefficients."""
        h = self._distortion(n, h_coefficients, "h")
        g = self._distortion(m, g_coefficients, "g")
        return _report("choquet", bounds.choquet_ratio_bounds(h, g, grid_size), m, n)

    @staticmethod
    def _distortion(order: int | None, coefficients: Sequence[float] | None, name: str) -> DistortionFunction:
        if coefficients:
            return DistortionFunction(coefficients)
        if order is None:
            raise GiniDomainError(f"distortion {name} needs an order or coefficients")
        return DistortionFunction.canonical(GiniOrder(order))

    def monotonicity(
        self,
        distribution: ParametricDistribution,
        n_max: int,
        versus: ParametricDistribution | None = None,
    ) -> MonotonicityReport:
        deviations, coefficients = bounds.monotonicity_check(
            ParametricQuantile(distribution), n_max, self.quadrature
        )
        versus_gc = crossing = None
        if versus is not None:
            crossing, coefficients, versus_gc = bounds.gc_crossing(
                ParametricQuantile(distribution), ParametricQuantile(versus), n_max, self.quadrature
            )
            logger.debug("GC crossing of %s against %s: %s", distribution.label, versus.label, crossing)
        return MonotonicityReport(
            distribution=distribution.label,
            orders=list(range(2, n_max + 1)),
            gd=deviations,
            gc=coefficients,
            gd_nonincreasing=bounds.is_nonincreasing(deviations, tolerance=1e-9),
            gc_nonincreasing=None if coefficients is None else bounds.is_nonincreasing(coefficients, 1e-9),
            versus=None if versus is None else versus.label,
            versus_gc=versus_gc,
            crossing_order=crossing,
        )
