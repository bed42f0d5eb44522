import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ...domain.entities.parametric_distribution import ParametricDistribution, parse_distribution
from ...domain.services import gini_core
from ...domain.value_objects.gini_order import GiniOrder
from ...domain.value_objects.quadrature_settings import QuadratureSettings
from ...domain.value_objects.special_function_tolerances import SpecialFunctionTolerances
from ..dto.reports import ComputeRow

logger = logging.getLogger(__name__)


class ParametricService:
    def __init__(
        self,
        quadrature: QuadratureSettings,
        tolerances: SpecialFunctionTolerances,
    ) -> None:
        self.quadrature = quadrature
        self.tolerances = tolerances

    def parse(self, text: str) -> ParametricDistribution:
        return parse_distribution(text, self.tolerances)

    def quantile(self, distribution: ParametricDistribution, t: npt.ArrayLike) -> npt.NDArray[np.float64]:
        return distribution.quantile(t)

    def closed_form_gd(self, distribution: ParametricDistribution, n: int) -> float | None:
        return distribution.closed_form_gd(GiniOrder(n))

    def closed_form_gc(self, distribution: ParametricDistribution, n: int) -> float | None:
        return distribution.closed_form_gc(GiniOrder(n))

    def gd_gc_quadrature(self, distribution: ParametricDistribution, n: int) -> tuple[float, float | None]:
        """GD_n and GC_n from the quantile integral, bypassing any closed form."""
        order = GiniOrder(n)
        gd = gini_core.gd_parametric(distribution, order, self.quadrature, prefer_closed_form=False)
        gc = None
        if distribution.is_nonnegative() and distribution.mean() > 0.0:
            gc = gd / distribution.mean()
        return gd, gc

    def gd_gc(self, distribution: ParametricDistribution, n: int) -> ComputeRow:
        order = GiniOrder(n)
        if distribution.as_step() is not None:
            method = "exact-step"
        elif distribution.closed_form_gd(order) is not None:
            method = "closed-form"
        else:
            method = "quadrature"
        gd = gini_core.gd_parametric(distribution, order, self.quadrature)
        gc = None
        if distribution.is_nonnegative() and distribution.mean() > 0.0:
            gc = gini_core.gc_parametric(distribution, order, self.quadrature)
        logger.debug("%s n=%d via %s: gd=%.12g", distribution.label, order, method, gd)
        return ComputeRow(distribution=distribution.label, n=order, gd=gd, gc=gc, method=method)

    def compute(self, distribution: ParametricDistribution, orders: Sequence[int]) -> list[ComputeRow]:
        return [self.gd_gc(distribution, n) for n in orders]

    def sample(self, distribution: ParametricDistribution, count: int, seed: int) -> npt.NDArray[np.float64]:
        return distribution.sample(count, seed)

    def covariance_oracle(
        self, distribution: ParametricDistribution, n: int, samples: int, seed: int
    ) -> tuple[float, float]:
        return gini_core.gd_n_cov_oracle(distribution, n, samples, seed)
