import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.application.dto.reports import EstimateReport
from src.application.services.estimation_service import EstimationService, rank_weights
from src.application.services.replication_runners import SerialReplicationRunner, ThreadedReplicationRunner
from src.domain.entities.parametric_distribution import Bernoulli, Exponential, LogNormal, Pareto
from src.domain.entities.quantile_function import StepQuantile
from src.domain.entities.sample import Sample
from src.domain.exceptions import AssumptionViolatedError, GiniDomainError
from src.domain.services import asymptotic_variance, gini_core
from src.domain.services.random_streams import replication_rng
from src.domain.value_objects.estimation_method import EstimationMethod
from src.domain.value_objects.gini_target import GiniTarget
from src.domain.value_objects.quadrature_settings import VarianceSettings
from src.domain.value_objects.weight_scheme import WeightScheme


@pytest.fixture
def service(serial_runner, variance_settings, quadrature) -> EstimationService:
    return EstimationService(serial_runner, variance_settings, quadrature)


@pytest.fixture
def exp_sample() -> Sample:
    return Sample(Exponential(1.0).sample(400, seed=12))


@pytest.mark.unit
class TestPointEstimators:
    def test_weights_on_three_points(self, service):
        s = Sample([3.0, 1.0, 2.0])
        assert service.estimate_gd(s, 2, WeightScheme.PAPER) == pytest.approx(10.0 / 9.0, abs=1e-15)
        assert service.estimate_gd(s, 2, WeightScheme.EXACT) == pytest.approx(4.0 / 9.0, abs=1e-15)

    def test_exact_scheme_is_the_empirical_functional(self, service, exp_sample):
        empirical = StepQuantile.from_sample(exp_sample.values)
        for n in (2, 4, 9):
            expected = gini_core.gd_n(empirical, n)
            assert service.estimate_gd(exp_sample, n, WeightScheme.EXACT) == pytest.approx(expected, abs=1e-12)

    def test_exact_weights_sum_to_zero(self):
        assert math.fsum(rank_weights(50, 6, WeightScheme.EXACT)) == pytest.approx(0.0, abs=1e-15)

    def test_coefficient_is_deviation_over_mean(self, service, exp_sample):
        gd = service.estimate_gd(exp_sample, 5)
        assert service.estimate_gc(exp_sample, 5) == pytest.approx(gd / exp_sample.mean(), rel=1e-12)

    def test_coefficient_needs_nonnegative_values(self, service):
        with pytest.raises(GiniDomainError):
            service.estimate_gc(Sample([-1.0, 2.0, 3.0]), 2)

    def test_sample_needs_two_values(self):
        with pytest.raises(GiniDomainError):
            Sample([1.0])

    def test_estimator_is_consistent(self, service):
        s = Sample(Exponential(1.0).sample(200_000, seed=3))
        assert service.estimate_gd(s, 4) == pytest.approx(Exponential(1.0).closed_form_gd(4), abs=0.01)

    def test_weight_schemes_agree_up_to_discretization(self, service, rng):
        for size in (10, 50, 500):
            for _ in range(20):
                s = Sample(rng.normal(0.0, 3.0, size=size))
                scale = float(np.max(np.abs(s.values)))
                for n in (2, 5, 10):
                    gap = abs(
                        service.estimate_gd(s, n, WeightScheme.PAPER) - service.estimate_gd(s, n, WeightScheme.EXACT)
                    )
                    assert gap <= 8.0 * scale * n * n / size

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 5, 10])
    def test_error_shrinks_with_sample_size(self, service, n):
        truth = Exponential(1.0).closed_form_gd(n)
        medians = []
        for size in (100, 1_000, 10_000, 100_000):
            errors = [
                abs(service.estimate_gd(Sample(Exponential(1.0).sample(size, seed=seed)), n) - truth)
                for seed in range(50)
            ]
            medians.append(float(np.median(errors)))
        assert all(later < earlier for earlier, later in zip(medians, medians[1:], strict=False))


@pytest.mark.unit
class TestBootstrap:
    def test_reproducible_for_a_seed(self, service, exp_sample):
        first = service.bootstrap_ci(exp_sample, 3, GiniTarget.GD, 0.9, 200, seed=8)
        second = service.bootstrap_ci(exp_sample, 3, GiniTarget.GD, 0.9, 200, seed=8)
        assert first == second
        assert first.method is EstimationMethod.BOOTSTRAP
        lo, hi = first.ci
        assert lo < hi

    def test_thread_count_does_not_change_results(self, variance_settings, quadrature, exp_sample):
        serial = EstimationService(SerialReplicationRunner(), variance_settings, quadrature)
        threaded = EstimationService(ThreadedReplicationRunner(4), variance_settings, quadrature)
        a = serial.bootstrap_ci(exp_sample, 4, GiniTarget.GC, 0.95, 120, seed=2)
        b = threaded.bootstrap_ci(exp_sample, 4, GiniTarget.GC, 0.95, 120, seed=2)
        assert a.ci == b.ci

    def test_single_resample_collapses(self, service, exp_sample):
        report = service.bootstrap_ci(exp_sample, 2, GiniTarget.GD, 0.95, 1, seed=0)
        lo, hi = report.ci
        assert report.point in (lo, hi)
        assert report.std_error == 0.0

    @pytest.mark.parametrize("seed", range(10))
    def test_interval_holds_point_on_small_skewed_samples(self, service, seed):
        s = Sample(Pareto(1.2, 1.0).sample(8, seed=seed))
        for target in (GiniTarget.GD, GiniTarget.GC):
            report = service.bootstrap_ci(s, 5, target, 0.5, 50, seed=seed)
            lo, hi = report.ci
            assert lo <= report.point <= hi

    def test_report_rejects_interval_missing_the_point(self):
        with pytest.raises(ValidationError):
            EstimateReport(
                point=1.0,
                n=2,
                target=GiniTarget.GD,
                scheme=WeightScheme.PAPER,
                std_error=0.1,
                ci_level=0.9,
                ci=(1.2, 1.5),
                method=EstimationMethod.BOOTSTRAP,
                sample_size=10,
                replications=100,
            )

    @pytest.mark.slow
    def test_percentile_interval_coverage(self, service):
        truth = Exponential(1.0).closed_form_gd(2)
        covered = 0
        for seed in range(100):
            s = Sample(Exponential(1.0).sample(5000, seed=1000 + seed))
            lo, hi = service.bootstrap_ci(s, 2, GiniTarget.GD, 0.95, 400, seed=seed).ci
            covered += lo <= truth <= hi
        assert covered >= 90

    @pytest.mark.parametrize("level", [0.0, 1.0, 1.2])
    def test_level_out_of_range(self, service, exp_sample, level):
        with pytest.raises(GiniDomainError):
            service.bootstrap_ci(exp_sample, 2, GiniTarget.GD, level, 10, seed=0)

    def test_streams_are_independent_of_order(self):
        late = replication_rng(5, 3).random(4)
        for index in range(3):
            replication_rng(5, index).random(4)
        assert np.array_equal(late, replication_rng(5, 3).random(4))


@pytest.mark.unit
class TestAsymptoticVariance:
    def test_exponential_classical_deviation(self, service):
        # degree-2 U-statistic: 4 Var(E[|x - Y| / 2]) = 1/3 for Exp(1)
        assert service.asymptotic_variance_gd(Exponential(1.0), 2) == pytest.approx(1.0 / 3.0, rel=1e-3)
        assert service.asymptotic_variance_gd(Exponential(1.0), 3) == pytest.approx(1.0 / 3.0, rel=1e-3)

    def test_lognormal_order_five(self, service):
        assert 2.28 <= service.asymptotic_variance_gd(LogNormal(0.0, 1.0), 5) <= 2.38
        assert 0.18 <= service.asymptotic_variance_gc(LogNormal(0.0, 1.0), 5) <= 0.20

    def test_scale_equivariance(self, service):
        base = service.asymptotic_variance_gd(Exponential(1.0), 4)
        assert service.asymptotic_variance_gd(Exponential(0.5), 4) == pytest.approx(4.0 * base, rel=1e-3)
        assert service.asymptotic_variance_gc(Exponential(0.5), 4) == pytest.approx(
            service.asymptotic_variance_gc(Exponential(1.0), 4), rel=1e-3
        )

    @pytest.mark.parametrize("distribution", [LogNormal(0.0, 1.0), Pareto(3.0, 2.0)])
    def test_integration_order_can_be_swapped(self, distribution):
        settings = VarianceSettings(nodes=20, panels=96)
        forward = asymptotic_variance.truncated_variance(distribution, 5, 0.0, 1e-6, settings)
        backward = asymptotic_variance.truncated_variance(distribution, 5, 0.0, 1e-6, settings, swap_order=True)
        assert backward == pytest.approx(forward, abs=1e-8)

    def test_discrete_family_rejected(self, service):
        with pytest.raises(AssumptionViolatedError):
            service.asymptotic_variance_gd(Bernoulli(p=0.3), 2)

    def test_pareto_without_second_moment_rejected(self, service):
        with pytest.raises(AssumptionViolatedError):
            service.asymptotic_variance_gd(Pareto(2.0, 1.0), 3)

    def test_variance_curve_rows(self, service):
        rows = service.variance_curve(Exponential(1.0), [2, 3, 6])
        assert [row.n for row in rows] == [2, 3, 6]
        assert all(row.variance_gc is not None for row in rows)

    def test_plugin_report_contains_point(self, service, exp_sample):
        report = service.plugin_asymptotic_report(exp_sample, 2, GiniTarget.GD, 0.95, Exponential(1.0))
        assert report.method is EstimationMethod.PLUGIN_ASYMPTOTIC
        assert report.std_error == pytest.approx(math.sqrt(1.0 / 3.0 / exp_sample.size), rel=1e-3)
        lo, hi = report.ci
        assert lo <= report.point <= hi

    @pytest.mark.slow
    def test_pareto_order_five(self, service):
        d = Pareto(3.0, 2.0)
        assert service.asymptotic_variance_gd(d, 5) == pytest.approx(1.83, rel=0.05)
        assert service.asymptotic_variance_gc(d, 5) == pytest.approx(0.13, rel=0.1)


@pytest.mark.unit
class TestSimulation:
    def test_summary_fields(self, service):
        summary = service.simulate_sampling_distribution(Exponential(1.0), 3, 200, 50, seed=1)
        assert summary.replications == 50
        assert summary.predicted_mean == pytest.approx(0.5)
        assert summary.predicted_variance_over_n == pytest.approx(1.0 / 3.0 / 200, rel=1e-3)
        assert 0.0 <= summary.ks_distance <= 1.0
        payload = summary.model_dump(by_alias=True)
        assert "predicted_variance_over_N" in payload

    def test_reproducible_across_thread_counts(self, variance_settings, quadrature):
        serial = EstimationService(SerialReplicationRunner(), variance_settings, quadrature)
        threaded = EstimationService(ThreadedReplicationRunner(3), variance_settings, quadrature)
        kwargs = dict(n=4, sample_size=100, replications=40, seed=9, compare_normal=False)
        a = serial.simulate_sampling_distribution(Exponential(1.0), **kwargs)
        b = threaded.simulate_sampling_distribution(Exponential(1.0), **kwargs)
        assert a == b
        assert a.ks_distance is None

    def test_rejects_tiny_samples(self, service):
        with pytest.raises(GiniDomainError):
            service.simulate_sampling_distribution(Exponential(1.0), 2, 1, 10, seed=0)


@pytest.mark.slow
@pytest.mark.integration
class TestSamplingDistributionAcceptance:
    @pytest.fixture
    def threaded(self, variance_settings, quadrature) -> EstimationService:
        return EstimationService(ThreadedReplicationRunner(4), variance_settings, quadrature)

    def test_lognormal_deviation(self, threaded):
        s = threaded.simulate_sampling_distribution(LogNormal(0.0, 1.0), 5, 5000, 2000, seed=0)
        assert s.estimate_mean == pytest.approx(0.74, abs=0.01)
        assert 1.98 <= 5000 * s.estimate_variance <= 2.68

    def test_lognormal_coefficient(self, threaded):
        s = threaded.simulate_sampling_distribution(
            LogNormal(0.0, 1.0), 5, 5000, 2000, seed=0, target=GiniTarget.GC
        )
        assert s.estimate_mean == pytest.approx(0.45, abs=0.01)
        assert 0.16 <= 5000 * s.estimate_variance <= 0.22

    def test_pareto_deviation(self, threaded):
        s = threaded.simulate_sampling_distribution(Pareto(3.0, 2.0), 5, 5000, 2000, seed=0, compare_normal=False)
        assert s.estimate_mean == pytest.approx(0.52, abs=0.01)
        assert 1.83 * 0.85 <= 5000 * s.estimate_variance <= 1.83 * 1.15
