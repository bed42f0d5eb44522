"""Scoring functions on (forecast, n-tuple) whose expected minimizers are Gini functionals."""

import math

import numpy as np
import numpy.typing as npt

from ..entities.observation_tuple import ObservationTuple, TupleSet
from ..exceptions import GiniDomainError
from ..value_objects.score_variant import ScoreKind, ScoreVariant

FloatArray = npt.NDArray[np.float64]


def _as_tuple_set(obs: ObservationTuple | TupleSet) -> TupleSet:
    if isinstance(obs, ObservationTuple):
        return TupleSet([obs.values])
    return obs


def _check_arity(variant: ScoreVariant, tuples: TupleSet) -> None:
    if tuples.order != variant.order:
        raise GiniDomainError(
            f"{variant.label} of order {variant.order} cannot score tuples of length {tuples.order}"
        )


def poly_statistic(variant: ScoreVariant, tuples: TupleSet) -> FloatArray:
    """``sum_i a_i max(y_1..y_i)`` for every tuple."""
    return tuples.running_maxima @ np.asarray(variant.coefficients)


def scores(variant: ScoreVariant, x: float, obs: ObservationTuple | TupleSet) -> FloatArray:
    """Score of forecast ``x`` on each tuple."""
    tuples = _as_tuple_set(obs)
    _check_arity(variant, tuples)
    n = variant.order
    spread = tuples.spreads
    match variant.kind:
        case ScoreKind.GD_M2:
            return (n * x - spread) ** 2
        case ScoreKind.GD_M1:
            return n * x * x - 2.0 * x * spread
        case ScoreKind.GC_M1:
            return x * x * tuples.first - (2.0 * x / n) * spread
        case _:
            return (x + poly_statistic(variant, tuples)) ** 2


def score(variant: ScoreVariant, x: float, obs: ObservationTuple) -> float:
    return float(scores(variant, x, obs)[0])


def mean_score(variant: ScoreVariant, x: float, tuples: TupleSet) -> float:
    return math.fsum(scores(variant, x, tuples)) / tuples.count


def exact_minimizer(variant: ScoreVariant, tuples: TupleSet) -> float:
    """Closed-form minimizer of the empirical mean score."""
    _check_arity(variant, tuples)
    if tuples.count == 0:
        raise GiniDomainError("empirical risk minimization needs at least one tuple")
    n = variant.order
    count = tuples.count
    match variant.kind:
        case ScoreKind.GD_M2 | ScoreKind.GD_M1:
            return math.fsum(tuples.spreads) / (n * count)
        case ScoreKind.GC_M1:
            first_mean = math.fsum(tuples.first) / count
            if not first_mean > 0.0:
                raise GiniDomainError("GC score needs a positive mean of the first observations")
            return math.fsum(tuples.spreads) / (n * count) / first_mean
        case _:
            return -math.fsum(poly_statistic(variant, tuples)) / count


def minimizer_std_error(variant: ScoreVariant, tuples: TupleSet) -> float:
    """Monte Carlo standard error of :func:`exact_minimizer` across tuples."""
    count = tuples.count
    if count < 2:
        return math.nan
    n = variant.order
    match variant.kind:
        case ScoreKind.GD_M2 | ScoreKind.GD_M1:
            return float(np.std(tuples.spreads, ddof=1) / (n * math.sqrt(count)))
        case ScoreKind.POLY:
            return float(np.std(poly_statistic(variant, tuples), ddof=1) / math.sqrt(count))
        case _:
            # delta method for a ratio of means
            top = tuples.spreads / n
            bottom = tuples.first
            ratio = exact_minimizer(variant, tuples)
            linear = (top - ratio * bottom) / (math.fsum(bottom) / count)
            return float(np.std(linear, ddof=1) / math.sqrt(count))
