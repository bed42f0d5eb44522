import math

import pytest

from src.application.services.bounds_service import BoundsService
from src.domain.entities.parametric_distribution import Bernoulli, Beta, Exponential, LogNormal, Pareto, TwoPoint
from src.domain.entities.quantile_function import ParametricQuantile, StepQuantile
from src.domain.exceptions import GiniDomainError
from src.domain.services import bounds, gini_core
from src.domain.value_objects.distortion_function import DistortionFunction


@pytest.fixture
def service(quadrature) -> BoundsService:
    return BoundsService(quadrature)


@pytest.mark.unit
class TestSdBound:
    def test_small_orders(self):
        assert bounds.sd_ratio_upper_bound(2) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-14)
        assert bounds.sd_ratio_upper_bound(3) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-14)
        assert bounds.sd_ratio_upper_bound(4) == pytest.approx(math.sqrt(19.0 / 70.0), rel=1e-14)

    def test_exact_and_float_paths_meet(self):
        limit = bounds.EXACT_SD_BOUND_LIMIT
        below = bounds.sd_ratio_upper_bound(limit)
        above = bounds.sd_ratio_upper_bound(limit + 1)
        assert 0.0 < above < below

    def test_holds_on_corpus(self, step_corpus):
        for q in step_corpus(300, seed=41):
            sd = q.std()
            for n in (2, 4, 9):
                assert gini_core.gd_n(q, n) <= bounds.sd_ratio_upper_bound(n) * sd + 1e-12

    @pytest.mark.parametrize("n", [2, 5, 10])
    def test_witness_reaches_the_bound(self, service, n):
        report = service.sd_bound(n, grid_size=10_000)
        assert report.witness_ratio == pytest.approx(report.bound, abs=1e-3)
        assert report.witness_ratio <= report.bound + 1e-12
        assert report.witness_mean == pytest.approx(0.0, abs=1e-12)

    def test_witness_needs_cells(self):
        with pytest.raises(GiniDomainError):
            bounds.sd_bound_witness(3, grid_size=1)


@pytest.mark.unit
class TestRatioBounds:
    def test_three_four(self, service):
        report = service.ratio_bounds(3, 4)
        assert report.lower == pytest.approx(0.875, abs=1e-15)
        assert report.upper == 1.0
        assert report.lower_attained
        assert not report.upper_attained

    def test_two_three_is_degenerate(self):
        bound = bounds.gd_ratio_bounds(2, 3)
        assert bound.lower == bound.upper == 1.0

    def test_needs_ordered_pair(self):
        with pytest.raises(GiniDomainError):
            bounds.gd_ratio_bounds(5, 3)

    def test_holds_on_corpus(self, step_corpus):
        for q in step_corpus(300, seed=43):
            for m, n in ((2, 4), (3, 7), (4, 10)):
                ratio = gini_core.gd_n(q, n) / gini_core.gd_n(q, m)
                assert bounds.gd_ratio_bounds(m, n).contains(ratio, tolerance=1e-12)

    def test_fair_coin_attains_the_lower_end(self):
        coin = StepQuantile([0.0, 0.5, 1.0], [0.0, 1.0])
        assert gini_core.gd_n(coin, 6) / gini_core.gd_n(coin, 3) == pytest.approx(
            bounds.gd_ratio_lower_bound(3, 6), rel=1e-12
        )


@pytest.mark.unit
class TestChoquetBounds:
    @pytest.mark.parametrize(("m", "n"), [(2, 4), (3, 4), (4, 9), (5, 12)])
    def test_reproduces_ratio_bounds(self, service, m, n):
        numeric = service.choquet_bounds(m=m, n=n)
        closed = service.ratio_bounds(m, n)
        assert numeric.lower == pytest.approx(closed.lower, abs=1e-8)
        assert numeric.upper == pytest.approx(closed.upper, abs=1e-8)

    def test_identical_distortions(self, service):
        report = service.choquet_bounds(m=5, n=5)
        assert report.lower == pytest.approx(1.0, abs=1e-12)
        assert report.upper == pytest.approx(1.0, abs=1e-12)

    def test_scaled_distortion(self, service):
        g = DistortionFunction.canonical(4)
        report = service.choquet_bounds(m=4, h_coefficients=[2.0 * c for c in g.coefficients])
        assert report.lower == pytest.approx(2.0, rel=1e-10)
        assert report.upper == pytest.approx(2.0, rel=1e-10)

    def test_needs_order_or_coefficients(self, service):
        with pytest.raises(GiniDomainError):
            service.choquet_bounds(m=3)

    def test_rejects_non_positive_distortion(self):
        with pytest.raises(GiniDomainError):
            bounds.choquet_ratio_bounds(DistortionFunction([-1.0]), DistortionFunction.canonical(2))


@pytest.mark.unit
class TestMonotonicity:
    def test_exponential(self, service):
        report = service.monotonicity(Exponential(1.0), 12)
        assert report.orders == list(range(2, 13))
        assert report.gd_nonincreasing
        assert report.gc_nonincreasing
        assert report.gc[2] == pytest.approx(11.0 / 24.0, rel=1e-8)

    def test_step_quantile_path(self, two_bracket_quantile):
        deviations, coefficients = bounds.monotonicity_check(two_bracket_quantile, 10)
        assert coefficients[0] == pytest.approx(0.426316, abs=1e-6)
        assert bounds.is_nonincreasing(coefficients)
        assert bounds.is_nonincreasing(deviations)

    def test_needs_order_two(self, two_bracket_quantile):
        with pytest.raises(GiniDomainError):
            bounds.monotonicity_check(two_bracket_quantile, 1)

    def test_identical_laws_never_cross(self, quadrature):
        q = ParametricQuantile(Exponential(1.0))
        crossing, left, right = bounds.gc_crossing(q, q, 6, quadrature)
        assert crossing is None
        assert left == right

    def test_heavy_tail_overtakes_lognormal(self, service):
        report = service.monotonicity(LogNormal(0.0, 1.0), 20, versus=Pareto(1.5, 1.0))
        # n = 2: 0.5205 against 1 / (2 alpha - 1) = 0.5
        assert report.gc[0] > report.versus_gc[0]
        assert report.crossing_order is not None
        assert report.crossing_order <= 20
        k = report.crossing_order - 2
        assert report.gc[k] < report.versus_gc[k]

    @pytest.mark.parametrize(
        "d",
        [
            Exponential(2.0),
            Pareto(3.0, 2.0),
            Pareto(1.5, 1.0),
            LogNormal(0.0, 1.0),
            Beta(0.5, 2.0),
            Beta(2.0, 5.0),
            TwoPoint(1.0, 4.0, 0.3),
            Bernoulli(p=0.05),
        ],
        ids=lambda d: d.label,
    )
    def test_every_family_is_nonincreasing_in_order(self, service, d):
        report = service.monotonicity(d, 20)
        assert report.gd_nonincreasing
        assert report.gc_nonincreasing

    def test_heavy_tail_overtakes_beta(self, service):
        # n = 2: Beta(0.5, 2) gives 0.5625 against 1 / (2 alpha - 1) = 0.5
        report = service.monotonicity(Beta(0.5, 2.0), 20, versus=Pareto(1.5, 0.1))
        assert report.gc[0] == pytest.approx(0.5625, rel=1e-8)
        assert report.gc[0] > report.versus_gc[0]
        assert report.crossing_order is not None
        k = report.crossing_order - 2
        assert report.gc[k] < report.versus_gc[k]
        assert report.gc[-1] < report.versus_gc[-1]
