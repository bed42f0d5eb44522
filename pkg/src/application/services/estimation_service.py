"""Sample estimators of GD_n and GC_n, their inference, and the sampling-distribution harness."""

import logging
import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import stats

from ...domain.entities.parametric_distribution import ParametricDistribution
from ...domain.entities.sample import Sample
from ...domain.exceptions import GiniDomainError
from ...domain.services import asymptotic_variance, gini_core
from ...domain.services.random_streams import replication_rng
from ...domain.value_objects.estimation_method import EstimationMethod
from ...domain.value_objects.gini_order import GiniOrder
from ...domain.value_objects.gini_target import GiniTarget
from ...domain.value_objects.quadrature_settings import QuadratureSettings, VarianceSettings
from ...domain.value_objects.weight_scheme import WeightScheme
from ..dto.reports import EstimateReport, SimulationSummary, VarianceRow
from ..interfaces.replication_runner import ReplicationRunner

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@lru_cache(maxsize=128)
def rank_weights(size: int, n: int, scheme: WeightScheme) -> FloatArray:
    """Weight of the i-th order statistic, ``i = 1..size``."""
    ranks = np.arange(1, size + 1) / size
    if scheme is WeightScheme.PAPER:
        weights = gini_core.phi(n, ranks, 1.0 - ranks) / size
    else:
        edges = np.arange(size + 1) / size
        weights = np.diff(gini_core.phi_antiderivative(n, edges))
    weights.setflags(write=False)
    return weights


def _check_level(level: float) -> None:
    if not 0.0 < level < 1.0:
        raise GiniDomainError(f"confidence level must lie in (0, 1), got {level}")


def _sample_gd(values: FloatArray, n: int, scheme: WeightScheme) -> float:
    return math.fsum(values * rank_weights(len(values), n, scheme))


def _sample_gc(values: FloatArray, n: int, scheme: WeightScheme) -> float:
    total = math.fsum(values)
    if values[0] < 0.0:
        raise GiniDomainError("sample Gini coefficient needs nonnegative values")
    if not total > 0.0:
        raise GiniDomainError("sample Gini coefficient needs a positive mean")
    return _sample_gd(values, n, scheme) / (total / len(values))


class EstimationService:
    def __init__(
        self,
        runner: ReplicationRunner,
        variance_settings: VarianceSettings,
        quadrature: QuadratureSettings,
    ) -> None:
        self.runner = runner
        self.variance_settings = variance_settings
        self.quadrature = quadrature

    def estimate_gd(self, s: Sample, n: int, scheme: WeightScheme = WeightScheme.PAPER) -> float:
        return _sample_gd(s.values, GiniOrder(n), scheme)

    def estimate_gc(self, s: Sample, n: int, scheme: WeightScheme = WeightScheme.PAPER) -> float:
        return _sample_gc(s.values, GiniOrder(n), scheme)

    def estimate(self, s: Sample, n: int, target: GiniTarget, scheme: WeightScheme) -> float:
        if target is GiniTarget.GD:
            return self.estimate_gd(s, n, scheme)
        return self.estimate_gc(s, n, scheme)

    def asymptotic_variance_gd(self, distribution: ParametricDistribution, n: int) -> float:
        return asymptotic_variance.asymptotic_variance_gd(distribution, n, self.variance_settings)

    def asymptotic_variance_gc(self, distribution: ParametricDistribution, n: int) -> float:
        return asymptotic_variance.asymptotic_variance_gc(
            distribution, n, self.variance_settings, self.quadrature
        )

    def asymptotic_variance(self, distribution: ParametricDistribution, n: int, target: GiniTarget) -> float:
        if target is GiniTarget.GD:
            return self.asymptotic_variance_gd(distribution, n)
        return self.asymptotic_variance_gc(distribution, n)

    def variance_curve(self, distribution: ParametricDistribution, orders: Sequence[int]) -> list[VarianceRow]:
        rows = []
        with_gc = distribution.is_nonnegative() and distribution.mean() > 0.0
        for n in orders:
            rows.append(
                VarianceRow(
                    distribution=distribution.label,
                    n=n,
                    variance_gd=self.asymptotic_variance_gd(distribution, n),
                    variance_gc=self.asymptotic_variance_gc(distribution, n) if with_gc else None,
                )
            )
        return rows

    def plugin_asymptotic_report(
        self,
        s: Sample,
        n: int,
        target: GiniTarget,
        level: float,
        distribution: ParametricDistribution,
        scheme: WeightScheme = WeightScheme.PAPER,
    ) -> EstimateReport:
        """Normal interval from the asymptotic variance of a reference distribution."""
        _check_level(level)
        point = self.estimate(s, n, target, scheme)
        std_error = math.sqrt(self.asymptotic_variance(distribution, n, target) / s.size)
        z = float(stats.norm.ppf(0.5 + level / 2.0))
        return EstimateReport(
            point=point,
            n=n,
            target=target,
            scheme=scheme,
            std_error=std_error,
            ci_level=level,
            ci=(point - z * std_error, point + z * std_error),
            method=EstimationMethod.PLUGIN_ASYMPTOTIC,
            sample_size=s.size,
        )

    def bootstrap_ci(
        self,
        s: Sample,
        n: int,
        target: GiniTarget,
        level: float,
        replications: int,
        seed: int,
        scheme: WeightScheme = WeightScheme.PAPER,
    ) -> EstimateReport:
        """Percentile bootstrap; resample ``i`` draws from its own (seed, i) stream."""
        _check_level(level)
        order = GiniOrder(n)
        if replications < 1:
            raise GiniDomainError(f"bootstrap needs at least 1 replication, got {replications}")
        if seed < 0:
            raise GiniDomainError(f"seed must be nonnegative, got {seed}")
        point = self.estimate(s, order, target, scheme)
        values = s.values
        statistic = _sample_gd if target is GiniTarget.GD else _sample_gc

        def one_resample(index: int) -> float:
            rng = replication_rng(seed, index)
            resampled = np.sort(rng.choice(values, size=len(values), replace=True))
            return statistic(resampled, order, scheme)

        estimates = self.runner.run(one_resample, replications)
        tail = 50.0 * (1.0 - level)
        lo, hi = np.percentile(estimates, [tail, 100.0 - tail])
        # widened so the interval always holds the point estimate
        lo, hi = min(float(lo), point), max(float(hi), point)
        std_error = float(np.std(estimates, ddof=1)) if replications > 1 else 0.0
        logger.debug("bootstrap %d resamples: interval (%.6g, %.6g)", replications, lo, hi)
        return EstimateReport(
            point=point,
            n=order,
            target=target,
            scheme=scheme,
            std_error=std_error,
            ci_level=level,
            ci=(lo, hi),
            method=EstimationMethod.BOOTSTRAP,
            sample_size=s.size,
            replications=replications,
        )

    def simulate_sampling_distribution(
        self,
        distribution: ParametricDistribution,
        n: int,
        sample_size: int,
        replications: int,
        seed: int,
        target: GiniTarget = GiniTarget.GD,
        scheme: WeightScheme = WeightScheme.PAPER,
        compare_normal: bool = True,
    ) -> SimulationSummary:
        """Replicate the estimator and compare it with its normal limit ``N(value, sigma^2 / N)``."""
        order = GiniOrder(n)
        if sample_size < 2:
            raise GiniDomainError(f"sample size must be at least 2, got {sample_size}")
        if replications < 1:
            raise GiniDomainError(f"need at least 1 replication, got {replications}")
        if seed < 0:
            raise GiniDomainError(f"seed must be nonnegative, got {seed}")
        statistic = _sample_gd if target is GiniTarget.GD else _sample_gc

        def one_replication(index: int) -> float:
            draws = np.sort(distribution.draw(replication_rng(seed, index), sample_size))
            return statistic(draws, order, scheme)

        estimates = self.runner.run(one_replication, replications)
        estimate_mean = math.fsum(estimates) / replications
        estimate_variance = float(np.var(estimates, ddof=1)) if replications > 1 else 0.0

        predicted_mean = predicted_variance = ks_distance = None
        if compare_normal:
            if target is GiniTarget.GD:
                predicted_mean = gini_core.gd_parametric(distribution, order, self.quadrature)
            else:
                predicted_mean = gini_core.gc_parametric(distribution, order, self.quadrature)
            predicted_variance = self.asymptotic_variance(distribution, order, target) / sample_size
            if predicted_variance > 0.0:
                standardized = (estimates - predicted_mean) / math.sqrt(predicted_variance)
                ks_distance = float(stats.kstest(standardized, "norm").statistic)
        logger.debug(
            "%s n=%d N=%d: %d replications, mean %.6g", distribution.label, order, sample_size,
            replications, estimate_mean,
        )
        return SimulationSummary(
            replications=replications,
            estimate_mean=estimate_mean,
            estimate_variance=estimate_variance,
            predicted_mean=predicted_mean,
            predicted_variance_over_N=predicted_variance,
            ks_distance=ks_distance,
            distribution=distribution.label,
            n=order,
            sample_size=sample_size,
            target=target,
        )
