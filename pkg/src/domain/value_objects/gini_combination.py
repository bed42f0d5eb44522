import math
from collections.abc import Sequence

from ..exceptions import GiniDomainError


class GiniCombination:
    """Weights ``a_1..a_k`` of ``sum_i a_i GD_i``.

    Orders default to ``1..k``; order 1 stands for the classical Gini deviation
    and is evaluated as ``GD_2``.
    """

    def __init__(
        self,
        weights: Sequence[float],
        orders: Sequence[int] | None = None,
        simplex: bool = False,
    ) -> None:
        if len(weights) == 0:
            raise GiniDomainError("a Gini combination needs at least one weight")
        resolved = list(orders) if orders is not None else list(range(1, len(weights) + 1))
        if len(resolved) != len(weights):
            raise GiniDomainError(
                f"{len(weights)} weights given for {len(resolved)} orders"
            )
        if any(order < 1 for order in resolved):
            raise GiniDomainError("combination orders must be at least 1")
        if not all(math.isfinite(w) for w in weights):
            raise GiniDomainError("combination weights must be finite")
        if simplex and (
            any(w < 0 for w in weights) or not math.isclose(math.fsum(weights), 1.0, abs_tol=1e-12)
        ):
            raise GiniDomainError("simplex weights must be nonnegative and sum to 1")
        self.weights = tuple(float(w) for w in weights)
        self.orders = tuple(int(order) for order in resolved)
        self.simplex = simplex

    def effective_orders(self) -> tuple[int, ...]:
        return tuple(max(order, 2) for order in self.orders)

    def terms(self) -> list[tuple[float, int]]:
        return list(zip(self.weights, self.effective_orders(), strict=True))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GiniCombination):
            return False
        return self.weights == other.weights and self.orders == other.orders

    def __hash__(self) -> int:
        return hash((self.weights, self.orders))
