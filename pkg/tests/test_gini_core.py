import math

import numpy as np
import pytest

from src.domain.entities.parametric_distribution import Beta, Exponential, LogNormal, Pareto
from src.domain.entities.quantile_function import ParametricQuantile, StepQuantile
from src.domain.exceptions import GiniDomainError
from src.domain.services import gini_core
from src.domain.services.quadrature import integrate_unit
from src.domain.value_objects.distortion_function import DistortionFunction, canonical_survival_expansion
from src.domain.value_objects.gini_combination import GiniCombination
from src.domain.value_objects.gini_order import GiniOrder


def _split_cell(q: StepQuantile, j: int) -> StepQuantile:
    """Replace level ``j`` by two equal-mass levels ``v - d`` and ``v + d``."""
    levels, breakpoints = q.levels, q.breakpoints
    below = levels[j] - levels[j - 1] if j > 0 else 1.0
    above = levels[j + 1] - levels[j] if j + 1 < len(levels) else 1.0
    d = 0.5 * min(below, above)
    middle = 0.5 * (breakpoints[j] + breakpoints[j + 1])
    new_breakpoints = np.insert(breakpoints, j + 1, middle)
    new_levels = np.concatenate((levels[:j], [levels[j] - d, levels[j] + d], levels[j + 1 :]))
    return StepQuantile(new_breakpoints, new_levels)


@pytest.mark.unit
class TestGiniOrder:
    def test_rejects_orders_below_two(self):
        with pytest.raises(GiniDomainError):
            GiniOrder(1)

    def test_parse_list(self):
        assert GiniOrder.parse_list("2, 5,10") == [2, 5, 10]
        assert GiniOrder.parse_list("") == []

    def test_non_integer_text_is_a_domain_error(self):
        with pytest.raises(GiniDomainError):
            GiniOrder("two")


@pytest.mark.unit
class TestDistortion:
    def test_endpoints_vanish(self):
        for n in (2, 3, 7, 40):
            assert gini_core.distortion_h(n, 0.0) == 0.0
            assert gini_core.distortion_h(n, 1.0) == 0.0

    def test_h2_is_t_times_one_minus_t(self):
        t = np.linspace(0.0, 1.0, 11)
        assert np.allclose(gini_core.distortion_h(2, t), t * (1.0 - t), atol=1e-15)

    def test_h2_equals_h3(self):
        t = np.linspace(0.0, 1.0, 101)
        assert np.allclose(gini_core.distortion_h(2, t), gini_core.distortion_h(3, t), atol=1e-15)

    def test_symmetric(self):
        t = np.linspace(0.0, 1.0, 57)
        assert np.allclose(gini_core.distortion_h(6, t), gini_core.distortion_h(6, 1.0 - t), atol=1e-15)

    def test_argument_outside_unit_interval(self):
        with pytest.raises(GiniDomainError):
            gini_core.distortion_h(3, 1.5)
        with pytest.raises(GiniDomainError):
            gini_core.distortion_h(3, -0.1)

    def test_tiny_argument_keeps_precision(self):
        # h_n(t) ~ t for small t
        assert gini_core.distortion_h(5, 1e-17) == pytest.approx(1e-17, rel=1e-12)

    def test_odd_order_top_coefficient_vanishes(self):
        assert canonical_survival_expansion(3)[-1] == 0
        assert canonical_survival_expansion(5)[-1] == 0
        assert canonical_survival_expansion(4)[-1] != 0

    def test_survival_expansion_reproduces_h(self):
        h = DistortionFunction.canonical(6)
        rebuilt = DistortionFunction.from_survival_expansion(h.survival_expansion())
        t = np.linspace(0.0, 1.0, 33)
        assert np.allclose(rebuilt(t), h(t), atol=1e-13)

    def test_polynomial_distortion_matches_canonical(self):
        canonical = DistortionFunction.canonical(4)
        general = DistortionFunction(list(canonical.coefficients))
        t = np.linspace(0.0, 1.0, 21)
        assert np.allclose(general(t), canonical(t), atol=1e-14)
        assert general.is_symmetric()

    def test_derivative_is_minus_phi(self):
        t = np.linspace(0.0, 1.0, 41)
        for n in (2, 5):
            canonical = DistortionFunction.canonical(n)
            general = DistortionFunction(list(canonical.coefficients))
            assert np.allclose(canonical.derivative(t), -gini_core.phi(n, t), atol=1e-14)
            assert np.allclose(general.derivative(t), -gini_core.phi(n, t), atol=1e-12)


@pytest.mark.unit
class TestStepQuantile:
    def test_two_bracket_values(self, two_bracket_quantile):
        assert gini_core.gd_n(two_bracket_quantile, 2) == pytest.approx(8.1, abs=1e-12)
        assert gini_core.gc_n(two_bracket_quantile, 2) == pytest.approx(0.426316, abs=1e-6)
        assert gini_core.gd_n(two_bracket_quantile, 10) == pytest.approx(5.86190, abs=1e-5)
        assert gini_core.gc_n(two_bracket_quantile, 10) == pytest.approx(0.308521, abs=1e-6)

    def test_constant_quantile_has_zero_deviation(self):
        q = StepQuantile.constant(7.0)
        assert q.is_constant()
        for n in (2, 5, 20):
            assert gini_core.gd_n(q, n) == 0.0
            assert gini_core.gc_n(q, n) == 0.0

    def test_left_continuous_lookup(self, two_bracket_quantile):
        assert two_bracket_quantile(0.9)[0] == 10.0
        assert two_bracket_quantile(0.9000001)[0] == 100.0

    def test_rejects_decreasing_levels(self):
        with pytest.raises(GiniDomainError):
            StepQuantile([0.0, 0.5, 1.0], [3.0, 1.0])

    def test_gc_needs_positive_mean(self):
        with pytest.raises(GiniDomainError):
            gini_core.gc_n(StepQuantile([0.0, 0.5, 1.0], [-1.0, 1.0]), 2)

    def test_gd2_equals_gd3(self, step_corpus):
        for q in step_corpus(1000, seed=3):
            assert gini_core.gd_n(q, 2) == pytest.approx(gini_core.gd_n(q, 3), abs=1e-12)

    def test_location_scale_and_symmetry(self, step_corpus):
        for q in step_corpus(200, seed=11):
            for n in (2, 4, 7):
                base = gini_core.gd_n(q, n)
                assert gini_core.gd_n(q.shift(3.5), n) == pytest.approx(base, abs=1e-12 * max(1.0, base) * 10)
                assert gini_core.gd_n(q.scale(2.5), n) == pytest.approx(2.5 * base, rel=1e-12)
                assert gini_core.gd_n(q.reflect(), n) == pytest.approx(base, abs=1e-12)

    def test_comonotonic_additivity(self, step_corpus):
        corpus = step_corpus(100, seed=19)
        for left, right in zip(corpus[::2], corpus[1::2], strict=True):
            total = left.add_comonotonic(right)
            for n in (2, 5):
                expected = gini_core.gd_n(left, n) + gini_core.gd_n(right, n)
                assert gini_core.gd_n(total, n) == pytest.approx(expected, abs=1e-11)

    def test_gc_in_unit_interval(self, step_corpus):
        for q in step_corpus(300, seed=5, nonnegative=True):
            for n in (2, 3, 10):
                assert 0.0 <= gini_core.gc_n(q, n) < 1.0

    def test_gc_n_nonincreasing(self, step_corpus):
        for q in step_corpus(100, seed=23, nonnegative=True):
            values = [gini_core.gc_n(q, n) for n in range(2, 21)]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:], strict=False))

    def test_enumeration_oracle(self, step_corpus):
        for q in step_corpus(40, max_levels=5, seed=29):
            for n in (2, 3, 4, 5):
                assert gini_core.gd_n(q, n) == pytest.approx(gini_core.gd_n_enumerated(q, n), abs=1e-12)

    def test_power_and_choquet_representations(self, step_corpus):
        for q in step_corpus(100, seed=31):
            for n in (2, 3, 6):
                expected = gini_core.gd_n(q, n)
                assert gini_core.gd_n_from_power(q, n) == pytest.approx(expected, abs=1e-12)
                choquet = gini_core.choquet_integral(q, DistortionFunction.canonical(n))
                assert choquet == pytest.approx(expected, abs=1e-12)

    def test_lorenz_gini_matches_gc2(self, step_corpus):
        for q in step_corpus(100, seed=37, nonnegative=True):
            assert gini_core.gc_from_lorenz(q) == pytest.approx(gini_core.gc_n(q, 2), abs=1e-12)

    def test_lorenz_of_two_bracket(self, two_bracket_quantile):
        assert gini_core.lorenz(two_bracket_quantile, 0.9) == pytest.approx(9.0 / 19.0, abs=1e-15)
        assert gini_core.lorenz(two_bracket_quantile, 1.0) == 1.0

    def test_combination_on_simplex(self, two_bracket_quantile):
        w = GiniCombination([0.5, 0.5], orders=[2, 10], simplex=True)
        expected = 0.5 * 8.1 + 0.5 * gini_core.gd_n(two_bracket_quantile, 10)
        assert gini_core.gd_combination(two_bracket_quantile, w) == pytest.approx(expected, abs=1e-12)

    def test_combination_is_location_free_and_homogeneous(self, step_corpus):
        w = GiniCombination([2.0, -1.0], orders=[2, 4])
        for q in step_corpus(100, seed=47):
            base = gini_core.gd_combination(q, w)
            assert gini_core.gd_combination(q.shift(-4.0), w) == pytest.approx(base, abs=1e-11)
            assert gini_core.gd_combination(q.scale(3.0), w) == pytest.approx(3.0 * base, abs=1e-11)

    def test_mean_preserving_spread_never_lowers_deviation(self, step_corpus):
        for q in step_corpus(200, seed=53):
            spread = _split_cell(q, len(q.levels) // 2)
            assert spread.mean() == pytest.approx(q.mean(), abs=1e-12)
            for n in (2, 3, 6, 12):
                assert gini_core.gd_n(spread, n) >= gini_core.gd_n(q, n) - 1e-12

    def test_coefficient_that_rounds_to_one_is_an_error(self, monkeypatch, two_bracket_quantile):
        monkeypatch.setattr(gini_core, "gd_n", lambda q, n, settings=None: q.mean())
        with pytest.raises(GiniDomainError):
            gini_core.gc_n(two_bracket_quantile, 4)


@pytest.mark.unit
class TestParametricIntegrals:
    def test_quadrature_matches_exponential_closed_form(self, quadrature):
        d = Exponential(1.0)
        for n in (2, 5, 17, 50):
            numeric = gini_core.gd_parametric(d, n, quadrature, prefer_closed_form=False)
            assert numeric == pytest.approx(d.closed_form_gd(n), rel=1e-8)

    def test_quadrature_matches_pareto_closed_form(self, quadrature):
        d = Pareto(3.0, 2.0)
        numeric = gini_core.gd_parametric(d, 5, quadrature, prefer_closed_form=False)
        assert numeric == pytest.approx(0.51818, abs=1e-5)

    def test_power_representation_on_lognormal(self, quadrature):
        q = ParametricQuantile(LogNormal(0.0, 1.0))
        assert gini_core.gd_n_from_power(q, 4, quadrature) == pytest.approx(gini_core.gd_n(q, 4, quadrature), rel=1e-8)

    def test_lorenz_gini_on_exponential(self, quadrature):
        assert gini_core.gc_from_lorenz(ParametricQuantile(Exponential(2.0)), quadrature) == pytest.approx(0.5, abs=1e-9)

    def test_uniform_lorenz_curve(self, quadrature):
        q = ParametricQuantile(Beta(1.0, 1.0))
        assert gini_core.lorenz(q, 0.5, quadrature) == pytest.approx(0.25, rel=1e-9)
        assert gini_core.gc_from_lorenz(q, quadrature) == pytest.approx(1.0 / 3.0, rel=1e-9)
        assert gini_core.gc_n(q, 2, quadrature) == pytest.approx(1.0 / 3.0, rel=1e-9)

    def test_parametric_lorenz_endpoints(self, quadrature):
        q = ParametricQuantile(Exponential(1.0))
        # L(p) = p + (1 - p) log(1 - p) for the exponential law
        p = 0.7
        assert gini_core.lorenz(q, p, quadrature) == pytest.approx(p + (1 - p) * math.log(1 - p), rel=1e-9)

    def test_power_distortion_is_mean_maximum(self, quadrature, two_bracket_quantile):
        q = ParametricQuantile(Exponential(1.0))
        assert gini_core.power_distortion(q, 3, quadrature) == pytest.approx(11.0 / 6.0, rel=1e-8)
        assert gini_core.power_distortion(two_bracket_quantile, 1) == pytest.approx(19.0, abs=1e-12)
        # max of two draws: top bracket unless both land below 0.9
        assert gini_core.power_distortion(two_bracket_quantile, 2) == pytest.approx(0.81 * 10 + 0.19 * 100, abs=1e-12)

    def test_integrate_unit_polynomial(self, quadrature):
        assert integrate_unit(lambda t, u: t * t, quadrature) == pytest.approx(1.0 / 3.0, rel=1e-12)

    @pytest.mark.slow
    def test_covariance_oracle(self):
        d = Exponential(1.0)
        estimate, std_error = gini_core.gd_n_cov_oracle(d, 4, 200_000, seed=1)
        # GD_n = Cov(X, phi_n(U))
        assert abs(estimate - d.closed_form_gd(4)) < 4 * std_error
