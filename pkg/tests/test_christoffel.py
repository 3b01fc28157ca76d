import numpy as np
import pytest

from arcszego.christoffel import (
    christoffel_value,
    extremal_values,
    orthonormalize,
    widom_square,
)
from arcszego.conformal import build_frame
from arcszego.measure import MeasureSpec, transplant_quadrature


@pytest.fixture(scope="module")
def seg_inf(unit_segment):
    return build_frame(unit_segment, None)


@pytest.fixture(scope="module")
def seg_2i(unit_segment):
    return build_frame(unit_segment, 2.0j)


@pytest.fixture(scope="module")
def cheb_system(seg_inf):
    ip = transplant_quadrature(seg_inf, MeasureSpec.parse("one"), M=4096)
    return orthonormalize(ip, 12)


class TestChebyshevOracle:
    def test_monic_norms(self, cheb_system):
        assert abs(cheb_system.monic_norm(0) - 1.0) < 1e-13
        for k in range(1, 13):
            assert abs(cheb_system.monic_norm(k) - 2.0 ** (0.5 - k)) < 1e-12

    def test_values_are_scaled_cosines(self, cheb_system):
        x = np.array([0.3, -0.77, 0.05])
        rows = cheb_system.evaluate(x, 8)
        th = np.arccos(x)
        assert np.max(np.abs(rows[0] - 1.0)) < 1e-12
        for k in range(1, 9):
            ref = np.sqrt(2.0) * np.cos(k * th)
            assert np.max(np.abs(rows[k] - ref)) < 1e-10

    def test_monic_minimizer_degree_three(self, cheb_system):
        x = np.array([0.9, -0.4, 0.12])
        vals = extremal_values(cheb_system, x, n=3)
        assert np.max(np.abs(vals - (x ** 3 - 0.75 * x))) < 1e-10

    def test_widom_square_is_two(self, seg_inf, cheb_system):
        for n in range(1, 13):
            assert abs(widom_square(seg_inf, cheb_system, n) - 2.0) < 1e-10


class TestLegendreOracle:
    # jacobi(1/2, 1/2) against equilibrium measure is dx/pi on [-1, 1],
    # so the monic norms are the Legendre ones divided by pi
    def test_monic_norms(self, seg_inf):
        # half-integer endpoint powers pull back to a kinked integrand,
        # so the trapezoidal error is O(M^-2) rather than spectral
        ip = transplant_quadrature(seg_inf, MeasureSpec.parse("jacobi(0.5, 0.5)"),
                                   M=32768)
        sys = orthonormalize(ip, 6)
        from math import factorial
        for k in range(7):
            num = 2.0 ** (2 * k + 1) * float(factorial(k)) ** 4
            den = (2 * k + 1) * float(factorial(2 * k)) ** 2
            ref = np.sqrt(num / den / np.pi)
            assert abs(sys.monic_norm(k) - ref) < 1e-8 * ref


class TestFiniteBase:
    def test_extremal_polynomial_attains_lambda(self, seg_inf):
        ip = transplant_quadrature(seg_inf, MeasureSpec.parse("quad_bump"),
                                   M=4096)
        sys = orthonormalize(ip, 10)
        lam = christoffel_value(sys, 2.0j, 10)
        vals = sys.evaluate(ip.nodes(), 10)
        at0 = sys.evaluate(np.array([2.0j]), 10)[:, 0]
        pstar = lam * (np.conj(at0) @ vals)
        norm_sq = ip.dot(pstar, pstar).real
        assert abs(norm_sq - lam) < 1e-12 * lam
        assert abs(extremal_values(sys, np.array([2.0j]), z0=2.0j, n=10)[0]
                   - 1.0) < 1e-12

    def test_variational_bound(self, seg_inf):
        # any competitor with value 1 at z0 must beat lambda from above
        ip = transplant_quadrature(seg_inf, MeasureSpec.parse("one"), M=4096)
        sys = orthonormalize(ip, 6)
        lam = christoffel_value(sys, 2.0j, 6)
        z = ip.nodes()
        comp = ((z - 0.3) / (2.0j - 0.3)) ** 6
        assert lam <= ip.dot(comp, comp).real + 1e-14

    def test_lambda_decreasing_in_n(self, seg_2i):
        ip = transplant_quadrature(seg_2i, MeasureSpec.parse("exp_cos(1.0)"),
                                   M=4096)
        sys = orthonormalize(ip, 8)
        lams = [christoffel_value(sys, 2.0j, n) for n in range(9)]
        assert all(b < a for a, b in zip(lams, lams[1:]))


class TestSystemStructure:
    def test_gram_identity(self, seg_2i):
        ip = transplant_quadrature(seg_2i, MeasureSpec.parse("quad_bump"),
                                   M=4096)
        sys = orthonormalize(ip, 8, mode="hardy")
        w = ip.weights("hardy")
        g = (sys.node_values * w) @ np.conj(sys.node_values.T)
        assert np.max(np.abs(g - np.eye(9))) < 1e-11

    def test_deterministic_rebuild(self, seg_inf):
        ip = transplant_quadrature(seg_inf, MeasureSpec.parse("exp_cos(0.7)"),
                                   M=2048)
        a = orthonormalize(ip, 7)
        b = orthonormalize(ip, 7)
        assert np.array_equal(a.hess, b.hess)
        assert np.array_equal(a.node_values, b.node_values)

    def test_breakdown_on_thin_support(self, seg_inf):
        spec = MeasureSpec("one", atoms=[(0.2, 0.3), (0.5, 0.4), (0.8, 0.3)],
                           scale=1e-323)
        ip = transplant_quadrature(seg_inf, spec, M=256)
        with pytest.raises(ValueError, match="fewer than"):
            orthonormalize(ip, 5)
        # three mass points still support a quadratic
        sys = orthonormalize(ip, 2)
        assert sys.degree == 2
