"""Tests for the Halley-iteration Lambert W and Wright omega reference values."""

import pytest
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import mpmath

from errors import DomainError, RayError
from oracle import (lambert_w, omega_constant, unwinding_number, wright_omega,
                    fundamental_u, psi_residual)


def residual(w, z):
    return abs(w * mpmath.exp(w) - z)


class TestLambertW:
    """Test the branches against known values and their defining equation."""

    def test_principal_branch_known_values(self):
        assert float(lambert_w(0, 1)) == pytest.approx(0.5671432904097838, abs=1e-15)
        assert float(lambert_w(0, mpmath.e)) == pytest.approx(1.0, abs=1e-15)
        assert float(lambert_w(0, 10)) == pytest.approx(1.7455280027406994, abs=1e-14)

    def test_lower_branch_known_value(self):
        assert float(lambert_w(-1, -0.1)) == pytest.approx(-3.577152063957297, abs=1e-13)

    def test_real_inputs_give_real_results(self):
        assert isinstance(lambert_w(0, 2), mpmath.mpf)
        assert isinstance(lambert_w(-1, mpmath.mpf('-0.2')), mpmath.mpf)

    def test_zero(self):
        assert lambert_w(0, 0) == 0
        with pytest.raises(DomainError, match="singular"):
            lambert_w(-1, mpmath.mpc(0))

    def test_branch_point(self):
        z = -1 / mpmath.e
        assert float(lambert_w(0, z)) == pytest.approx(-1.0, abs=1e-6)
        assert float(lambert_w(-1, z)) == pytest.approx(-1.0, abs=1e-6)

    def test_below_branch_point_is_promoted_to_complex(self):
        w = lambert_w(0, -0.5)
        assert isinstance(w, mpmath.mpc)
        assert float(w.real) == pytest.approx(-0.7940236323446894, abs=1e-12)
        assert float(w.imag) == pytest.approx(0.7701117505103791, abs=1e-12)

    def test_complex_arguments_satisfy_defining_equation(self):
        for k in (-1, 0, 1):
            for z in (mpmath.mpc(1, 2), mpmath.mpc(-3, -0.5), mpmath.mpc(0.1, 0.01), mpmath.mpc(50, -20)):
                w = lambert_w(k, z)
                assert residual(w, z) < 1e-12 * max(1, abs(z))

    def test_branch_imaginary_ranges(self):
        z = mpmath.mpc(2, 1)
        assert -mpmath.pi < lambert_w(0, z).imag < mpmath.pi
        assert lambert_w(1, z).imag > mpmath.pi
        assert lambert_w(-1, z).imag < -mpmath.pi

    def test_invalid_branches(self):
        with pytest.raises(DomainError, match="branch k"):
            lambert_w(2, 1)
        with pytest.raises(DomainError, match="no real values"):
            lambert_w(1, 0.5)
        with pytest.raises(DomainError, match="W_-1"):
            lambert_w(-1, 0.5)

    def test_omega_constant(self):
        assert float(omega_constant()) == pytest.approx(0.5671432904097838, abs=1e-15)
        with mpmath.workprec(200):
            omega0 = omega_constant()
            assert abs(omega0 * mpmath.exp(omega0) - 1) < mpmath.mpf(2) ** -190


class TestWrightOmega:
    """Test the Wright omega function and the unwinding number."""

    def test_unwinding_number(self):
        assert unwinding_number(mpmath.mpc(0, 0)) == 0
        assert unwinding_number(mpmath.mpc(1, 4)) == 1
        assert unwinding_number(mpmath.mpc(1, -4)) == -1
        assert unwinding_number(mpmath.mpc(0, mpmath.pi)) == 0

    def test_real_argument(self):
        assert float(wright_omega(0)) == pytest.approx(0.5671432904097838, abs=1e-15)
        assert float(wright_omega(1)) == pytest.approx(1.0, abs=1e-15)

    def test_complex_arguments_satisfy_defining_equation(self):
        for z in (mpmath.mpc(1, 2), mpmath.mpc(-2, 3), mpmath.mpc(0.5, -4), mpmath.mpc(-3, -1)):
            w = wright_omega(z)
            assert abs(w + mpmath.log(w) - z) < 1e-12

    def test_rays_are_rejected(self):
        with pytest.raises(RayError):
            wright_omega(mpmath.mpc(-2, mpmath.pi))
        with pytest.raises(RayError):
            wright_omega(mpmath.mpc(-1, -mpmath.pi))

    def test_ray_error_is_a_domain_error(self):
        with pytest.raises(DomainError):
            wright_omega(mpmath.mpc(-5, mpmath.pi))


class TestFundamentalRelation:
    """Test the closed-form u and the psi residual."""

    def test_fundamental_u_solves_relation(self):
        for sigma, tau in ((0.5, 0.3), (0.2, 0.7), (mpmath.mpc(0.3, 0.1), mpmath.mpc(0.2, -0.1))):
            u = fundamental_u(sigma, tau)
            value = 1 - mpmath.exp(-u) + mpmath.mpmathify(sigma) * u - tau
            assert abs(value) < 1e-13

    def test_fundamental_u_vanishes_at_zero_tau(self):
        assert abs(fundamental_u(0.4, 0)) < 1e-14

    def test_fundamental_u_at_zero_sigma(self):
        assert float(fundamental_u(0, 0.5)) == pytest.approx(float(mpmath.log(2)), abs=1e-15)

    def test_psi_residual(self):
        for t in (-3, 0, 0.5, 2, 10):
            assert psi_residual(t) < 1e-13


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
