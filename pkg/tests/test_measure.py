import numpy as np
import pytest

from arcszego.conformal import build_frame
from arcszego.measure import (
    MeasureSpec,
    endpoint_log_moment,
    normalized_on,
    szego_log_mean,
    transplant_quadrature,
    widom_log_mean,
)


# frozen oracles for the segment [-1, 1]:
# arcsine moments int x^{2k} domega = binom(2k, k)/4^k
ARCSINE_M2 = 0.5
ARCSINE_M4 = 0.375
# int log(1 + x^2/2) domega = log((5 + 2 sqrt(6))/8)
LOG_QUAD_BUMP = float(np.log((5.0 + 2.0 * np.sqrt(6.0)) / 8.0))
# int log rho_inf domega = log(2/pi)
LOG_RHO_INF = float(np.log(2.0 / np.pi))
# int log|z - 1| domega_{2i} = log sqrt(5) - log(2 + sqrt(5))
LOG_EDGE_2I = float(np.log(np.sqrt(5.0)) - np.log(2.0 + np.sqrt(5.0)))


@pytest.fixture(scope="module")
def seg_inf(unit_segment):
    return build_frame(unit_segment, None)


@pytest.fixture(scope="module")
def seg_2i(unit_segment):
    return build_frame(unit_segment, 2.0j)


@pytest.fixture(scope="module")
def par_inf(parabola_arc):
    return build_frame(parabola_arc, None)


@pytest.fixture(scope="module")
def par_2i(parabola_arc):
    return build_frame(parabola_arc, 2.0j)


class TestMeasureSpec:
    def test_parse_builtins(self):
        assert MeasureSpec.parse("one").kind == "one"
        sp = MeasureSpec.parse("jacobi(0.5, 0.5)")
        assert sp.exponents == (0.5, 0.5)
        sp = MeasureSpec.parse("exp_cos(1.0)")
        assert abs(sp.smooth(0.0) - np.e) < 1e-15
        sp = MeasureSpec.parse("quad_bump")
        assert abs(sp.smooth(0.5) - 1.0) < 1e-15
        assert abs(sp.smooth(1.0) - 1.5) < 1e-15

    def test_parse_rejects_garbage(self):
        for bad in ("bogus", "jacobi(0.5)", "exp_cos", "one(3)"):
            with pytest.raises(ValueError):
                MeasureSpec.parse(bad)

    def test_jacobi_exponent_range(self):
        with pytest.raises(ValueError, match="exceed"):
            MeasureSpec.parse("jacobi(-0.6, 0)")

    def test_atom_validation(self):
        with pytest.raises(ValueError, match="atom"):
            MeasureSpec("one", atoms=[(1.5, 0.1)])
        with pytest.raises(ValueError, match="atom"):
            MeasureSpec("one", atoms=[(0.5, -0.1)])

    def test_config_with_samples(self):
        t = (1.0 - np.cos(np.pi * np.arange(65) / 64)) / 2.0
        rows = np.column_stack([t, 1.0 + t])
        sp = MeasureSpec.from_config({"density": {"samples": rows}})
        assert abs(sp.smooth(0.3) - 1.3) < 1e-12

    def test_samples_require_chebyshev_grid(self):
        t = np.linspace(0, 1, 65)
        with pytest.raises(ValueError, match="Chebyshev"):
            MeasureSpec("samples", samples=np.column_stack([t, 1.0 + t]))

    def test_samples_admit_isolated_zeros(self):
        t = (1.0 - np.cos(np.pi * np.arange(65) / 64)) / 2.0
        v = 1.0 + np.cos(2 * np.pi * t)
        v[32] = 0.0
        sp = MeasureSpec("samples", samples=np.column_stack([t, v]))
        assert sp.smooth(t[32]) == 0.0
        with pytest.raises(ValueError, match="nonnegative"):
            MeasureSpec("samples", samples=np.column_stack([t, v - 0.5]))


class TestTransplantQuadrature:
    def test_equilibrium_moments(self, seg_inf):
        ip = transplant_quadrature(seg_inf, MeasureSpec.parse("one"), M=4096)
        one = np.ones(ip.M, dtype=complex)
        x = ip.nodes().real.astype(complex)
        assert abs(ip.mass() - 1.0) < 1e-13
        assert abs(ip.dot(x, one)) < 1e-13
        assert abs(ip.dot(x, x) - ARCSINE_M2) < 1e-13
        assert abs(ip.dot(x * x, x * x) - ARCSINE_M4) < 1e-13

    def test_rebase_preserves_the_measure(self, seg_inf, seg_2i):
        # mu = omega_inf integrated in the 2i frame is still omega_inf
        ip = transplant_quadrature(seg_2i, MeasureSpec.parse("one"), M=4096,
                                   frame_inf=seg_inf)
        assert abs(ip.mass() - 1.0) < 1e-10
        x = ip.nodes().real.astype(complex)
        assert abs(ip.dot(x, x) - ARCSINE_M2) < 1e-10

    def test_rebase_general_arc(self, par_inf, par_2i):
        spec = MeasureSpec.parse("quad_bump")
        ip_a = transplant_quadrature(par_inf, spec, M=4096)
        ip_b = transplant_quadrature(par_2i, spec, M=4096, frame_inf=par_inf)
        assert abs(ip_a.mass() - ip_b.mass()) < 1e-9
        za = ip_a.nodes()
        zb = ip_b.nodes()
        m_a = ip_a.dot(za, za)
        m_b = ip_b.dot(zb, zb)
        assert abs(m_a - m_b) < 1e-9

    def test_hardy_norm_of_one_doubles_the_mass(self, seg_inf, seg_2i,
                                                par_inf, par_2i):
        # both boundary sides are paired against the same density, so the
        # contour norm of 1 is 2 int f domega in every frame
        for fr in (seg_inf, seg_2i, par_inf, par_2i):
            ip = transplant_quadrature(fr, MeasureSpec.parse("one"), M=4096)
            one = np.ones(ip.M, dtype=complex)
            assert abs(ip.dot(one, one, mode="hardy") - 2.0) < 1e-10

    def test_atoms_enter_plain_mass(self, seg_inf):
        spec = MeasureSpec("one", atoms=[(0.37, 0.5)])
        ip = transplant_quadrature(seg_inf, spec, M=2048)
        assert abs(ip.mass() - 1.5) < 1e-12
        assert abs(ip.mass(include_atoms=False) - 1.0) < 1e-12
        n_all = ip.nodes()
        assert n_all.size == 2048 + 1
        assert abs(n_all[-1] - seg_inf.arc.gamma(0.37)) < 1e-14

    def test_adaptive_node_count(self, seg_inf):
        spec = MeasureSpec.parse("exp_cos(1.0)")
        ip = transplant_quadrature(seg_inf, spec)
        assert ip.M == 8192
        ref = transplant_quadrature(seg_inf, spec, M=16384)
        assert abs(ip.mass() - ref.mass()) < 1e-12

    def test_weights_deterministic(self, par_2i):
        spec = MeasureSpec.parse("exp_cos(1.0)")
        a = transplant_quadrature(par_2i, spec, M=2048)
        b = transplant_quadrature(par_2i, spec, M=2048)
        assert np.array_equal(a.weights("measure"), b.weights("measure"))
        assert np.array_equal(a.weights("hardy"), b.weights("hardy"))


class TestLogIntegrals:
    def test_endpoint_moment_at_infinity(self, seg_inf):
        assert abs(endpoint_log_moment(seg_inf, "A") - np.log(0.5)) < 1e-14
        assert abs(endpoint_log_moment(seg_inf, "B") - np.log(0.5)) < 1e-14

    def test_endpoint_moment_finite(self, seg_2i):
        assert abs(endpoint_log_moment(seg_2i, "B") - LOG_EDGE_2I) < 1e-13

    def test_endpoint_moment_against_quadrature(self, par_2i):
        # slow direct integration of the log singularity as a cross-check
        M = 32768
        tb = 2.0 * np.pi * (np.arange(M) + 0.5) / M
        tw = par_2i.theta_w_from_theta_B(tb)
        z, _, _ = par_2i.arc_from_theta_w(tw)
        direct = np.mean(np.log(np.abs(z - par_2i.arc.B)))
        assert abs(direct - endpoint_log_moment(par_2i, "B")) < 1e-3

    def test_szego_log_mean_jacobi(self, seg_inf):
        spec = MeasureSpec.parse("jacobi(0.5, 0.5)")
        assert abs(szego_log_mean(seg_inf, spec) + np.log(2.0)) < 1e-12

    def test_szego_log_mean_quad_bump(self, seg_inf):
        spec = MeasureSpec.parse("quad_bump")
        assert abs(szego_log_mean(seg_inf, spec) - LOG_QUAD_BUMP) < 1e-12

    def test_widom_log_mean_equilibrium(self, seg_inf):
        spec = MeasureSpec.parse("one")
        assert abs(widom_log_mean(seg_inf, spec) - LOG_RHO_INF) < 1e-12

    def test_widom_log_mean_against_direct(self, par_2i, par_inf):
        # endpoint-split result vs naive quadrature of the singular
        # integrand f rho, which reduces to the total density of omega_inf
        spec = MeasureSpec.parse("one")
        split = widom_log_mean(par_2i, spec, frame_inf=par_inf)
        from arcszego.conformal import harmonic_density
        hm_inf = harmonic_density(par_inf)
        M = 32768
        tb = 2.0 * np.pi * (np.arange(M) + 0.5) / M
        tw = par_2i.theta_w_from_theta_B(tb)
        z, t, side = par_2i.arc_from_theta_w(tw)
        direct = np.mean(np.log(hm_inf.density(t)))
        assert abs(split - direct) < 1e-3

    def test_normalization(self, seg_inf):
        spec = normalized_on(MeasureSpec.parse("quad_bump"), seg_inf)
        assert abs(spec.scale - 0.8) < 1e-12
        ip = transplant_quadrature(seg_inf, spec, M=2048)
        assert abs(ip.mass() - 1.0) < 1e-12
