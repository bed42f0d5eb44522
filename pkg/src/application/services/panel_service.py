"""GC_n panels and top-share series over grouped percentile data."""

import logging
from collections.abc import Iterable, Sequence

from ...domain.entities.grouped_distribution import GroupedDistribution
from ...domain.exceptions import GiniDomainError
from ...domain.services import bounds, gini_core
from ...domain.value_objects.gini_order import GiniOrder
from ..dto.reports import PanelError, PanelRow, PanelTable

logger = logging.getLogger(__name__)


class PanelService:
    def panel_row(
        self, grouped: GroupedDistribution, orders: Sequence[int], shares: Sequence[float]
    ) -> PanelRow:
        quantile = grouped.to_step_quantile()
        coefficients = {int(n): gini_core.gc_n(quantile, GiniOrder(n)) for n in orders}
        if not bounds.is_nonincreasing([coefficients[n] for n in sorted(coefficients)]):
            logger.warning("%s %s: GC_n increases with n", grouped.entity, grouped.year)
        return PanelRow(
            entity=grouped.entity,
            year=grouped.year,
            gc=coefficients,
            top_shares={alpha: grouped.top_share(alpha) for alpha in shares},
            flagged=grouped.flagged,
        )

    def gini_panel(
        self,
        data: Iterable[GroupedDistribution],
        orders: Sequence[int],
        shares: Sequence[float],
    ) -> PanelTable:
        """One row per (entity, year), sorted; rows that fail are reported, not raised."""
        order_list = [GiniOrder(n) for n in orders]
        share_list = list(shares)
        for alpha in share_list:
            if not 0.0 < alpha < 1.0:
                raise GiniDomainError(f"top-share fraction must lie in (0, 1), got {alpha}")
        table = PanelTable(orders=[int(n) for n in order_list], shares=share_list)
        for grouped in sorted(data, key=lambda g: g.key):
            try:
                table.rows.append(self.panel_row(grouped, order_list, share_list))
            except GiniDomainError as exc:
                logger.warning("%s %s skipped: %s", grouped.entity, grouped.year, exc)
                table.errors.append(PanelError(entity=grouped.entity, year=grouped.year, message=str(exc)))
        logger.debug("panel: %d rows, %d errors", len(table.rows), len(table.errors))
        return table

    def merge(
        self,
        first: GroupedDistribution,
        second: GroupedDistribution,
        weight: float = 0.5,
        entity: str | None = None,
        year: int | None = None,
    ) -> GroupedDistribution:
        return first.merge(second, weight, entity, year)
