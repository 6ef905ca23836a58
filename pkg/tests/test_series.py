"""Tests for the series expansions of W and their coefficients."""

import pytest
import tempfile
import shutil
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import mpmath
import numpy as np

import db
import series
from series import (SeriesSpec, SeriesVariables, CoefficientTable, coefficient_table,
                    coeff_cm_exact, improved_coefficient, comtet_u, improved_u, eulerian_u,
                    sigma_series_u, partial_u, phi_alpha, transformed_w, wright_coefficients,
                    wright_series_a, wright_series_eval, origin_series, coverage_interval,
                    branch_m1_approx, fundamental_residual, transformed_variables,
                    untransformed_variables, tau_zero, tau_argmax)
from errors import ConfigError, DomainError, SingularityError
from oracle import fundamental_u, lambert_w


def _poly_mul(p, q, order):
    product = [Fraction(0)] * (order + 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q[:order + 1 - i]):
                product[i + j] += a * b
    return product


def _reverted_coefficients(sigma, order):
    """Exact c_1 .. c_order of u(tau) from 1 - e^(-u) + sigma u = tau."""
    a = [Fraction(0), 1 + sigma] + [Fraction((-1) ** (k + 1), factorial(k)) for k in range(2, order + 1)]
    b = [Fraction(0)] * (order + 1)
    b[1] = 1 / a[1]
    for n in range(2, order + 1):
        power = list(b)
        total = Fraction(0)
        for k in range(2, n + 1):
            power = _poly_mul(power, b, order)
            total += a[k] * power[n]
        b[n] = -total / a[1]
    return b[1:]


def _interpolate(xs, ys):
    """Coefficients, lowest power first, of the polynomial through (xs, ys)."""
    coeffs = [Fraction(0)] * len(xs)
    for i, (x_i, y_i) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denominator = Fraction(1)
        for j, x_j in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= x_j * basis[t + 1]
            denominator *= x_i - x_j
        for t, c in enumerate(basis):
            coeffs[t] += y_i * c / denominator
    return coeffs


@pytest.fixture(autouse=True)
def temp_settings():
    """Point settings lookups at an empty temporary directory."""
    temp_dir = tempfile.mkdtemp()
    original_get_app_dir = db.get_app_dir
    db.get_app_dir = lambda: Path(temp_dir)
    db.DB_PATH = None

    yield temp_dir

    db.get_app_dir = original_get_app_dir
    db.DB_PATH = None
    shutil.rmtree(temp_dir, ignore_errors=True)


class TestSeriesSpec:
    """Test the validation of series selections."""

    def test_unknown_variant(self):
        with pytest.raises(ConfigError, match="unknown series variant"):
            SeriesSpec('taylor', 10)

    def test_bad_truncation(self):
        with pytest.raises(ConfigError, match="truncation"):
            SeriesSpec('improved', 0)

    def test_alpha_and_p_are_exclusive(self):
        with pytest.raises(ConfigError, match="either alpha or p"):
            SeriesSpec('improved', 10, alpha=2, p=1)

    def test_parameter_defaults(self):
        spec = SeriesSpec('comtet', 5)
        assert spec.parameter_alpha == 1
        assert spec.parameter_p == 0

    def test_parameters_are_linked(self):
        spec = SeriesSpec('improved', 5, p=1)
        assert float(spec.parameter_alpha) == pytest.approx(float(mpmath.e))

    def test_coefficient_table_is_one_indexed(self):
        table = CoefficientTable((Fraction(1), Fraction(2)), 'eulerian')
        assert table[1] == 1
        assert len(table) == 2
        with pytest.raises(IndexError):
            table[0]


class TestCoefficients:
    """Test the c_m(sigma) representations against each other."""

    def test_first_coefficients(self):
        sigma = Fraction(1, 3)
        assert coeff_cm_exact(sigma, 1) == Fraction(3, 4)
        # c_2 = 1 / (2 (1+sigma)^3)
        assert coeff_cm_exact(sigma, 2) == Fraction(27, 128)

    def test_eulerian_and_improved_forms_agree(self):
        for sigma in (Fraction(1, 3), Fraction(-1, 2), Fraction(5), Fraction(-7, 3)):
            for m in range(1, 21):
                assert coeff_cm_exact(sigma, m) == improved_coefficient(sigma, m), (sigma, m)

    def test_zeta_polynomials_agree(self):
        for m in range(1, 16):
            assert series.eulerian_zeta_polynomial(m) == series.improved_zeta_polynomial(m)

    def test_no_zeta_squared_monomial(self):
        # c_m from reverting 1 - e^(-u) + sigma u = tau, then read off in zeta
        order = 7
        zetas = [Fraction(j, 4) for j in range(1, 2 * order + 1)]
        reverted = [_reverted_coefficients(1 / zeta - 1, order) for zeta in zetas]
        for m in range(1, order + 1):
            coeffs = _interpolate(zetas, [c[m - 1] for c in reverted])
            assert coeffs[2] == 0, m
            expected = list(series.eulerian_zeta_polynomial(m))
            expected += [Fraction(0)] * (len(coeffs) - len(expected))
            assert coeffs == expected, m

    def test_zero_sigma_gives_harmonic_coefficients(self):
        for m in range(1, 12):
            assert coeff_cm_exact(0, m) == Fraction(1, m)
            assert improved_coefficient(0, m) == Fraction(1, m)

    def test_undefined_at_minus_one(self):
        with pytest.raises(DomainError, match="sigma = -1"):
            coeff_cm_exact(-1, 3)
        with pytest.raises(DomainError):
            coefficient_table(-1, 3)

    def test_table_exact_and_numeric_agree(self):
        exact = coefficient_table(Fraction(3, 10), 25)
        numeric = coefficient_table(0.3, 25, provenance='improved')
        assert numeric.provenance == 'improved'
        for m in range(1, 26):
            assert isinstance(exact[m], Fraction)
            assert abs(numeric[m] - float(exact[m])) <= 1e-13 * abs(float(exact[m]))

    def test_unknown_provenance(self):
        with pytest.raises(ConfigError):
            coefficient_table(Fraction(1, 2), 3, provenance='comtet')


class TestPartialSums:
    """Test the partial sums of u against the closed form."""

    def test_exact_variables_give_exact_sums(self):
        variables = SeriesVariables(Fraction(1, 3), Fraction(1, 4))
        assert variables.exact
        improved = improved_u(variables, 12)
        assert isinstance(improved, Fraction)
        assert improved == eulerian_u(variables, 12)

    def test_improved_converges_to_closed_form(self):
        variables = SeriesVariables(Fraction(1, 3), Fraction(1, 4))
        u = improved_u(variables, 30)
        assert abs(fundamental_residual(u, variables)) < 1e-14

    def test_zero_sigma_is_log_series(self):
        variables = SeriesVariables(0, Fraction(1, 2))
        assert improved_u(variables, 3) == Fraction(1, 2) + Fraction(1, 8) + Fraction(1, 24)

    def test_zero_tau(self):
        assert comtet_u(SeriesVariables(Fraction(1, 2), 0), 10) == 0
        assert improved_u(SeriesVariables(0.5, 0.0), 10) == 0

    def test_comtet_exact_matches_numeric(self):
        exact = comtet_u(SeriesVariables(Fraction(2, 5), Fraction(1, 3)), 12)
        numeric = comtet_u(SeriesVariables(0.4, mpmath.mpf(1) / 3), 12)
        assert float(exact) == pytest.approx(float(numeric), abs=1e-14)

    def test_comtet_needs_nonzero_sigma(self):
        with pytest.raises(DomainError):
            comtet_u(SeriesVariables(0, 0.5), 5)

    def test_sigma_series_matches_closed_form(self):
        variables = SeriesVariables(0.05, 0.05)
        u = sigma_series_u(variables, 20)
        assert abs(u - fundamental_u(0.05, 0.05)) < 1e-12

    def test_partial_u_dispatch(self):
        variables = SeriesVariables(Fraction(1, 2), Fraction(1, 5))
        assert partial_u(variables, SeriesSpec('eulerian', 8)) == eulerian_u(variables, 8)
        with pytest.raises(ConfigError, match="not a series for u"):
            partial_u(variables, SeriesSpec('wright-ln', 8))

    def test_variables_properties(self):
        variables = SeriesVariables(Fraction(1, 2), Fraction(1, 4))
        assert variables.zeta == Fraction(2, 3)
        assert variables.lam == Fraction(1, 2)
        with pytest.raises(DomainError):
            SeriesVariables(-1, 0.5).zeta
        with pytest.raises(DomainError):
            SeriesVariables(0, 0.5).lam


class TestAssembledW:
    """Test the W values assembled from the partial sums."""

    def test_comtet_at_ten(self):
        value = phi_alpha(10, 1, SeriesSpec('comtet', 40))
        assert abs(value - lambert_w(0, 10)) < 1e-12

    def test_comtet_at_five(self):
        value = phi_alpha(5, 1, SeriesSpec('comtet', 60))
        assert abs(value - lambert_w(0, 5)) < 1e-9

    def test_comtet_at_three_converges_slowly(self):
        # About 0.94 per order, so N = 80 is still far from double precision
        oracle = lambert_w(0, 3)
        tail = max(abs(phi_alpha(3, 1, SeriesSpec('comtet', N)) - oracle) for N in range(76, 81))
        assert tail < 1e-4
        assert tail < abs(phi_alpha(3, 1, SeriesSpec('comtet', 40)) - oracle)

    def test_comtet_and_improved_agree_above_e(self):
        for x in np.geomspace(5, 100, 50):
            comtet = phi_alpha(x, 1, SeriesSpec('comtet', 40))
            improved = phi_alpha(x, 1, SeriesSpec('improved', 40))
            assert abs(comtet - improved) < 1e-7, x

    def test_improved_just_above_one(self):
        x = mpmath.mpf('1.1')
        assert abs(phi_alpha(x, 1, SeriesSpec('improved', 60)) - lambert_w(0, x)) < 1e-6


    def test_comtet_error_shrinks_with_truncation(self):
        oracle = lambert_w(0, 10)
        coarse = abs(phi_alpha(10, 1, SeriesSpec('comtet', 10)) - oracle)
        fine = abs(phi_alpha(10, 1, SeriesSpec('comtet', 40)) - oracle)
        assert fine < coarse

    def test_improved_and_eulerian_at_ten(self):
        oracle = lambert_w(0, 10)
        for variant in ('improved', 'eulerian'):
            assert abs(phi_alpha(10, 1, SeriesSpec(variant, 30)) - oracle) < 1e-12

    def test_improved_near_one(self):
        # Below e, where the Comtet series diverges
        value = phi_alpha(2, 1, SeriesSpec('improved', 60))
        assert abs(value - lambert_w(0, 2)) < 1e-6

    def test_alpha_shifted_expansion(self):
        # Phi_alpha(x) = alpha W(x^(1/alpha) / alpha)
        x = mpmath.mpf(10) ** 4
        value = phi_alpha(x, 2, SeriesSpec('improved', 40))
        assert abs(value - 2 * lambert_w(0, mpmath.sqrt(x) / 2)) < 1e-12

    def test_wright_ln_variant(self):
        value = phi_alpha(2, 1, SeriesSpec('wright-ln', 40))
        assert abs(value - lambert_w(0, 2)) < 1e-12

    def test_phi_alpha_domain(self):
        with pytest.raises(DomainError, match="x > 1"):
            phi_alpha(1, 1, SeriesSpec('improved', 5))
        with pytest.raises(DomainError, match="alpha > 0"):
            phi_alpha(5, 0, SeriesSpec('improved', 5))

    def test_transformed_at_p_zero_matches_untransformed(self):
        for variant in ('comtet', 'improved'):
            spec = SeriesSpec(variant, 20)
            assert transformed_w(7, 0, spec) == phi_alpha(7, 1, spec)

    def test_transformed_with_positive_p(self):
        value = transformed_w(5, 1, SeriesSpec('improved', 60))
        assert abs(value - lambert_w(0, 5)) < 1e-10

    def test_transformed_below_one(self):
        # p = 1 moves the singular point to z = 1/e
        value = transformed_w(mpmath.mpf('0.8'), 1, SeriesSpec('improved', 80))
        assert abs(value - lambert_w(0, mpmath.mpf('0.8'))) < 1e-6

    def test_transformed_singular_point(self):
        with pytest.raises(SingularityError):
            transformed_w(1, 0, SeriesSpec('improved', 5))
        with pytest.raises(SingularityError):
            transformed_variables(1, 0)

    def test_untransformed_variables_domain(self):
        with pytest.raises(DomainError):
            untransformed_variables(1)
        variables = untransformed_variables(mpmath.e ** 2)
        assert float(variables.sigma) == pytest.approx(0.5)
        assert float(variables.tau) == pytest.approx(float(mpmath.log(2)) / 2)

    def test_transformed_variables_monotone_in_p(self):
        points = [transformed_variables(5, p) for p in np.linspace(-1, 3, 50)]
        assert all(b.sigma < a.sigma for a, b in zip(points, points[1:]))
        assert all(b.tau > a.tau for a, b in zip(points, points[1:]))

    def test_tau_zero_and_argmax(self):
        p = mpmath.mpf('0.5')
        assert abs(transformed_variables(tau_zero(p), p).tau) < 1e-14
        peak = tau_argmax(p)
        top = transformed_variables(peak, p).tau
        assert top > transformed_variables(peak * mpmath.mpf('1.1'), p).tau
        assert top > transformed_variables(peak * mpmath.mpf('0.9'), p).tau


class TestWrightSeries:
    """Test the expansion of W(e^t) about t = 0."""

    def test_methods_agree_exactly(self):
        w = Fraction(2, 3)
        reference = wright_coefficients(12, 'recurrence', w)
        for method in ('eulerian', 'assoc-stirling1', 'assoc-stirling2'):
            table = wright_coefficients(12, method, w)
            assert table.values == reference.values, method

    def test_methods_agree_at_omega(self):
        reference = wright_coefficients(20)
        for method in ('eulerian', 'assoc-stirling1', 'assoc-stirling2'):
            table = wright_coefficients(20, method)
            for n in range(1, 21):
                assert abs(table[n] - reference[n]) <= 1e-14 * abs(reference[n])

    def test_first_coefficients(self):
        w = Fraction(1, 2)
        assert wright_series_a(1, 'eulerian', w) == Fraction(1, 3)
        assert wright_series_a(2, 'recurrence', w) == Fraction(2, 27)

    def test_unknown_method(self):
        with pytest.raises(ConfigError):
            wright_coefficients(3, 'taylor')

    def test_expansion_point_must_be_positive(self):
        with pytest.raises(DomainError):
            wright_coefficients(3, 'recurrence', -1)

    def test_eval_at_e(self):
        assert abs(wright_series_eval(mpmath.e, 60) - 1) < 1e-12

    def test_eval_at_one(self):
        assert wright_series_eval(1, 5) == lambert_w(0, 1)

    def test_eval_near_radius(self):
        x = mpmath.exp(3)
        assert abs(wright_series_eval(x, 200) - lambert_w(0, x)) < 1e-8

    def test_eval_domain(self):
        with pytest.raises(DomainError):
            wright_series_eval(-1, 5)


class TestOriginSeriesAndCoverage:
    """Test the series about the origin and the coverage report."""

    def test_origin_series_exact(self):
        assert origin_series(Fraction(1, 10), 3) == Fraction(183, 2000)

    def test_origin_series_numeric(self):
        assert abs(origin_series(0.1, 40) - lambert_w(0, 0.1)) < 1e-15

    def test_coverage(self):
        assert coverage_interval(0.2) == ['origin', 'wright-ln']
        assert coverage_interval(1) == ['wright-ln']
        assert coverage_interval(2) == ['wright-ln', 'improved']
        assert coverage_interval(100) == ['improved', 'comtet']

    def test_coverage_domain(self):
        with pytest.raises(DomainError):
            coverage_interval(0)


class TestBranchMinusOne:
    """Test the approximants of W_-1 on [-1/e, 0)."""

    def test_transformed_is_exact_at_branch_point(self):
        value = branch_m1_approx(-1 / mpmath.e, 'transformed')
        assert abs(value + 1) < 1e-12

    def test_values_at_minus_point_two(self):
        z = mpmath.mpf('-0.2')
        transformed = branch_m1_approx(z, 'transformed')
        untransformed = branch_m1_approx(z, 'untransformed')
        assert float(transformed) == pytest.approx(-2.3810, abs=1e-3)
        assert float(untransformed.real) == pytest.approx(-2.5181, abs=1e-3)
        assert float(untransformed.imag) == pytest.approx(-0.5154, abs=1e-3)

    def test_transformed_is_closer(self):
        for label in ('-0.1', '-0.2', '-0.3'):
            z = mpmath.mpf(label)
            oracle = lambert_w(-1, z)
            assert abs(branch_m1_approx(z, 'transformed') - oracle) < abs(branch_m1_approx(z, 'untransformed') - oracle)

    def test_domain(self):
        with pytest.raises(DomainError):
            branch_m1_approx(mpmath.mpf('0.1'))
        with pytest.raises(DomainError):
            branch_m1_approx(mpmath.mpf('-0.5'))
        with pytest.raises(ConfigError):
            branch_m1_approx(mpmath.mpf('-0.2'), 'exact')


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
