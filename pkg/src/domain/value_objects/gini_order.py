from ..exceptions import GiniDomainError


class GiniOrder(int):
    """Number of independent draws behind a higher-order Gini index; always >= 2."""

    minimum = 2

    def __new__(cls, value: int | str) -> "GiniOrder":
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            raise GiniDomainError(f"Gini order must be an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise GiniDomainError(f"Gini order must be an integer, got {value!r}")
        if as_int < cls.minimum:
            raise GiniDomainError(f"Gini order must be at least 2, got {as_int}")
        return super().__new__(cls, as_int)

    @property
    def is_odd(self) -> bool:
        return self % 2 == 1

    @classmethod
    def parse_list(cls, text: str) -> list["GiniOrder"]:
        """Parse ``"2,5,10"`` into orders; an empty string gives an empty list."""
        parts = [part.strip() for part in text.split(",") if part.strip()]
        return [cls(part) for part in parts]

    def __repr__(self) -> str:
        return f"GiniOrder({int(self)})"
