"""Polynomial distortion functions on [0, 1].

A distortion ``h`` with ``h(0) = 0`` defines the signed Choquet integral
``rho_h(X) = integral of q(t) h'(1 - t) dt``. The canonical member is
``h_n(t) = (1 - t**n - (1 - t)**n) / n``, whose integral is the n-th order
Gini deviation.
"""

from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial

from ..exceptions import GiniDomainError

FloatArray = npt.NDArray[np.float64]

_SYMMETRY_GRID = np.linspace(0.0, 1.0, 257)


def _power_complement(t: FloatArray, n: int) -> FloatArray:
    """``(1 - t)**n`` through ``exp(n log1p(-t))``, exact at the endpoints."""
    out = np.zeros_like(t)
    inside = t < 1.0
    with np.errstate(divide="ignore", under="ignore"):
        out[inside] = np.exp(n * np.log1p(-t[inside]))
    return out


def _power(t: FloatArray, n: int) -> FloatArray:
    out = np.zeros_like(t)
    inside = t > 0.0
    with np.errstate(divide="ignore", under="ignore"):
        out[inside] = np.exp(n * np.log(t[inside]))
    return out


class DistortionFunction:
    def __init__(
        self,
        coefficients: Sequence[float],
        order: int | None = None,
    ) -> None:
        """Build ``h(t) = sum_k coefficients[k-1] * t**k``; the constant term is forced to 0."""
        if len(coefficients) == 0:
            raise GiniDomainError("a distortion function needs at least one coefficient")
        values = [float(c) for c in coefficients]
        if not all(np.isfinite(values)):
            raise GiniDomainError("distortion coefficients must be finite")
        self.coefficients = tuple(values)
        self.order = order
        self._polynomial = Polynomial([0.0, *values])

    @classmethod
    def canonical(cls, n: int) -> "DistortionFunction":
        if n < 2:
            raise GiniDomainError(f"canonical distortion needs n >= 2, got {n}")
        # h_n(t) = h_n(1 - t), so its t- and (1 - t)-expansions coincide.
        exact = canonical_survival_expansion(n)
        return cls([float(c) for c in exact], order=n)

    @classmethod
    def from_survival_expansion(cls, survival: Sequence[float]) -> "DistortionFunction":
        """Build ``h`` from ``h(t) = sum_k survival[k-1] * (1 - t)**k``."""
        in_u = Polynomial([0.0, *[float(b) for b in survival]])
        in_t = in_u(Polynomial([1.0, -1.0]))
        coefficients = list(in_t.coef)
        if abs(coefficients[0]) > 1e-12 * max(1.0, max(abs(c) for c in coefficients)):
            raise GiniDomainError("survival expansion does not vanish at t = 0")
        return cls(coefficients[1:] or [0.0])

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def __call__(self, t: npt.ArrayLike) -> FloatArray:
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.order is not None:
            n = self.order
            s = np.minimum(t_arr, 1.0 - t_arr)
            with np.errstate(divide="ignore", under="ignore"):
                near = -np.expm1(n * np.log1p(-s))
            return (near - _power(s, n)) / n
        return np.asarray(self._polynomial(t_arr), dtype=np.float64)

    def derivative(self, t: npt.ArrayLike) -> FloatArray:
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.order is not None:
            n = self.order
            return _power_complement(t_arr, n - 1) - _power(t_arr, n - 1)
        return np.asarray(self._polynomial.deriv()(t_arr), dtype=np.float64)

    def leading_ratio_at_zero(self, other: "DistortionFunction") -> float:
        """``lim h(t) / g(t)`` as ``t`` falls to 0, from the lowest nonzero power of ``t``."""
        return _lowest_order_ratio(self.coefficients, other.coefficients)

    def leading_ratio_at_one(self, other: "DistortionFunction") -> float:
        """``lim h(t) / g(t)`` as ``t`` rises to 1, from the lowest nonzero power of ``1 - t``."""
        return _lowest_order_ratio(self.survival_expansion(), other.survival_expansion())

    def phi_antiderivative(self, t: npt.ArrayLike) -> FloatArray:
        """``Phi_n(t) = (t**n + (1 - t)**n) / n``; defined for the canonical distortion only."""
        if self.order is None:
            raise GiniDomainError("phi antiderivative exists only for the canonical h_n")
        n = self.order
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return (_power(t_arr, n) + _power_complement(t_arr, n)) / n

    def survival_expansion(self) -> tuple[float, ...]:
        """Coefficients ``b_1..b_d`` with ``h(t) = sum_k b_k (1 - t)**k``."""
        if self.order is not None:
            return tuple(float(b) for b in canonical_survival_expansion(self.order))
        in_u = self._polynomial(Polynomial([1.0, -1.0]))
        coef = list(in_u.coef) + [0.0] * (self.degree + 1 - len(in_u.coef))
        return tuple(float(c) for c in coef[1 : self.degree + 1])

    def at_one(self) -> float:
        return float(self(np.array([1.0]))[0])

    def is_symmetric(self, atol: float = 1e-12) -> bool:
        if self.order is not None:
            return True
        forward = self(_SYMMETRY_GRID)
        backward = self(1.0 - _SYMMETRY_GRID)
        return bool(np.allclose(forward, backward, rtol=0.0, atol=atol))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistortionFunction):
            return False
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        if self.order is not None:
            return f"DistortionFunction.canonical({self.order})"
        return f"DistortionFunction({list(self.coefficients)})"


def _lowest_order_ratio(top: Sequence[float], bottom: Sequence[float]) -> float:
    scale = max([abs(c) for c in (*top, *bottom)] or [1.0])
    cutoff = 1e-13 * scale
    for k in range(max(len(top), len(bottom))):
        a = top[k] if k < len(top) else 0.0
        b = bottom[k] if k < len(bottom) else 0.0
        if abs(b) > cutoff:
            return a / b
        if abs(a) > cutoff:
            return float(np.copysign(np.inf, a))
    return float("nan")


@lru_cache(maxsize=64)
def canonical_survival_expansion(n: int) -> tuple[Fraction, ...]:
    """Exact ``b_1..b_n`` of ``h_n`` in powers of ``u = 1 - t``; ``b_n`` is 0 for odd n."""
    # h_n = (1 - (1-u)^n - u^n) / n with (1-u)^n = sum_k C(n,k) (-u)^k.
    coefficients = [Fraction(-comb(n, k) * (-1) ** k, n) for k in range(1, n + 1)]
    coefficients[-1] -= Fraction(1, n)
    return tuple(coefficients)
