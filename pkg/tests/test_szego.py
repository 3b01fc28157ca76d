"""Outer functions, kernel data, and the closed forms of the Widom limit."""

import numpy as np
import pytest

from arcszego import szego
from arcszego.conformal import build_frame, harmonic_density
from arcszego.measure import (MeasureSpec, szego_log_mean,
                              transplant_quadrature)

INV_PI = 0.3183098861837907       # outer value R(inf) on [-1, 1]
TWO_OVER_PI = 0.6366197723675814  # exp(int log rho_inf domega) = 2/pi

EVAL_PTS = np.array([0.5 + 1.2j, -0.8 + 0.9j, 2.5 + 0.3j, 3.0j,
                     -2.0 + 1.5j, 0.1 + 0.4j, 1.2 - 0.9j, -0.5 - 1.1j])
INTERIOR_W = [0.5 + 1.2j, -0.8 + 0.9j, 2.5 + 0.3j, 3.0j]


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
def par_base(parabola_arc):
    return build_frame(parabola_arc, 0.4 + 1.9j)


def rebased_density(frame, frame_inf, spec, t):
    """f_{z0} at arc parameters t (density against the frame's measure)."""
    vals = spec.density_on(frame.arc, t)
    if frame.z0 is None:
        return vals
    hm = harmonic_density(frame)
    hm_inf = harmonic_density(frame_inf)
    return vals * hm_inf.density(t) / hm.density(t)


def boundary_phi_phase(frame, t, side):
    tw = np.asarray(frame.theta_w_from_arc(t, side))
    return np.exp(1j * (tw + frame.beta))


class TestOuterFunctions:

    def test_unit_density_gives_unit_outer(self, seg_inf):
        # f = 1 against the frame's own harmonic measure, so only at infinity
        sz = szego.szego_data(seg_inf, MeasureSpec("one"))
        assert abs(sz.R_f.at_base() - 1.0) < 1e-12
        assert np.max(np.abs(sz.R_f(EVAL_PTS) - 1.0)) < 1e-11

    def test_rebased_unit_density(self, seg_2i, seg_inf):
        # seen from 2i the same measure has density rho_inf / rho_{2i} < 1
        # in the geometric mean, strictly, since the ratio is not constant
        sz = szego.szego_data(seg_2i, MeasureSpec("one"), frame_inf=seg_inf)
        assert 0.0 < sz.R_f.at_base() < 1.0
        want = np.exp(szego_log_mean(seg_2i, MeasureSpec("one"),
                                     frame_inf=seg_inf))
        assert sz.R_f.at_base() == pytest.approx(want, rel=1e-10)

    def test_constant_density_gives_constant_outer(self, seg_2i, seg_inf):
        ip = transplant_quadrature(seg_2i, MeasureSpec("one"), M=2048,
                                   frame_inf=seg_inf)
        out = szego.szego_function(
            seg_2i, ip, lambda z, t, side: np.full(np.shape(t), 3.7))
        assert np.max(np.abs(out(EVAL_PTS) - 3.7)) < 1e-12

    def test_equilibrium_outer_values_at_infinity(self, seg_inf):
        sz = szego.szego_data(seg_inf, MeasureSpec("one"))
        assert sz.R_rho.at_base() == pytest.approx(TWO_OVER_PI, rel=1e-8)
        assert sz.R.at_base() == pytest.approx(INV_PI, rel=1e-10)

    def test_base_value_matches_log_integral(self, seg_inf, seg_2i):
        combos = [(seg_inf, MeasureSpec("jacobi", (0.5, 0.5)), None),
                  (seg_inf, MeasureSpec("exp_cos", (0.9,)), None),
                  (seg_2i, MeasureSpec("quad_bump"), seg_inf),
                  (seg_2i, MeasureSpec("jacobi", (0.5, 1.5)), seg_inf)]
        for frame, spec, finf in combos:
            sz = szego.szego_data(frame, spec, frame_inf=finf)
            want = np.exp(szego_log_mean(frame, spec, frame_inf=finf))
            assert sz.R_f.at_base() == pytest.approx(want, rel=1e-8)

    def test_jacobi_outer_at_infinity(self, seg_inf):
        # exp(int (a log|x-(-1)| + b log|x-1|) domega_inf) = 2^{-a-b}
        sz = szego.szego_data(seg_inf, MeasureSpec("jacobi", (0.5, 0.5)))
        assert sz.R_f.at_base() == pytest.approx(0.5, rel=1e-10)

    def test_boundary_modulus_matches_density(self, seg_2i, seg_inf):
        t = np.linspace(0.05, 0.95, 31)
        for spec in (MeasureSpec("quad_bump"),
                     MeasureSpec("jacobi", (0.5, 1.5))):
            sz = szego.szego_data(seg_2i, spec, frame_inf=seg_inf)
            want = rebased_density(seg_2i, seg_inf, spec, t)
            for side in (1, -1):
                got = np.abs(sz.R_f.boundary(t, side, r=1.0 - 1e-6))
                assert np.max(np.abs(got - want) / want) < 1e-4

    def test_multiplicativity(self, seg_2i, seg_inf):
        ip = transplant_quadrature(seg_2i, MeasureSpec("one"), M=2048,
                                   frame_inf=seg_inf)

        def g1(z, t, side):
            return 1.0 + 0.5 * (2.0 * np.asarray(t) - 1.0) ** 2

        def g2(z, t, side):
            return np.exp(0.4 * np.cos(np.pi * np.asarray(t)))

        o1 = szego.szego_function(seg_2i, ip, g1)
        o2 = szego.szego_function(seg_2i, ip, g2)
        o12 = szego.szego_function(
            seg_2i, ip, lambda z, t, s: g1(z, t, s) * g2(z, t, s))
        got = (o1 * o2)(EVAL_PTS)
        want = o12(EVAL_PTS)
        assert np.max(np.abs(got - want) / np.abs(want)) < 1e-8

    def test_square_root_squares_back(self, seg_2i, seg_inf):
        sz = szego.szego_data(seg_2i, MeasureSpec("quad_bump"),
                              frame_inf=seg_inf)
        root = sz.R_rho.power(0.5)
        got = root(EVAL_PTS) ** 2
        want = sz.R_rho(EVAL_PTS)
        assert np.max(np.abs(got - want) / np.abs(want)) < 1e-12

    def test_jensen_bound(self, seg_2i, seg_inf):
        # R_f(z0) = exp(int log f) <= int f, strict unless f is constant
        rng = np.random.default_rng(1724)
        grid = (1.0 - np.cos(np.pi * np.arange(129) / 128)) / 2.0
        for _ in range(10):
            coef = rng.uniform(-0.5, 0.5, size=3)
            vals = np.exp(sum(c * np.cos((k + 1) * np.pi * grid)
                              for k, c in enumerate(coef)))
            spec = MeasureSpec("samples",
                               samples=np.column_stack([grid, vals]))
            sz = szego.szego_data(seg_2i, spec, frame_inf=seg_inf)
            ip = transplant_quadrature(seg_2i, spec, M=4096,
                                       frame_inf=seg_inf)
            mass = ip.mass()
            assert sz.R_f.at_base() <= mass
            assert mass - sz.R_f.at_base() > 1e-6
        # equality needs f constant in the frame doing the averaging
        sz1 = szego.szego_data(seg_inf, MeasureSpec("one"))
        ip1 = transplant_quadrature(seg_inf, MeasureSpec("one"), M=4096)
        assert abs(ip1.mass() - sz1.R_f.at_base()) < 1e-10


class TestSzegoGate:

    def subarc_zero_spec(self):
        grid = (1.0 - np.cos(np.pi * np.arange(65) / 64)) / 2.0
        vals = np.where(grid > 0.5, (grid - 0.5) ** 2, 0.0)
        return MeasureSpec("samples", samples=np.column_stack([grid, vals]))

    def test_subarc_zero_flags_failure(self, seg_inf):
        sz = szego.szego_data(seg_inf, self.subarc_zero_spec())
        assert not sz.szego_condition_ok
        assert sz.R_f.is_zero
        assert sz.R_f.at_base() == 0.0
        assert np.all(sz.R_f(EVAL_PTS) == 0.0)

    def test_failed_condition_gives_zero_limit(self, seg_inf):
        sz = szego.szego_data(seg_inf, self.subarc_zero_spec())
        assert szego.widom_limit_rhs(seg_inf, sz) == (0.0, 0.0)

    def test_kernel_refuses_zero_szego_function(self, seg_inf):
        sz = szego.szego_data(seg_inf, self.subarc_zero_spec())
        with pytest.raises(ValueError,
                           match=r"strong asymptotics undefined \(R_f = 0\)"):
            szego.kernel(seg_inf, sz)

    def test_szego_function_gate(self, seg_inf):
        ip = transplant_quadrature(seg_inf, MeasureSpec("one"), M=2048)
        out = szego.szego_function(
            seg_inf, ip,
            lambda z, t, side: np.where(np.asarray(t) > 0.5,
                                        np.asarray(t) - 0.5, 0.0))
        assert out.is_zero


class TestKernelData:

    def kernel_for(self, frame, spec, finf):
        sz = szego.szego_data(frame, spec, frame_inf=finf)
        return sz, szego.kernel(frame, sz)

    def test_extremal_is_one_at_base(self, seg_2i, seg_inf, par_base,
                                     par_inf):
        combos = [(seg_2i, MeasureSpec("quad_bump"), seg_inf),
                  (seg_2i, MeasureSpec("jacobi", (0.5, 0.5)), seg_inf),
                  (par_base, MeasureSpec("exp_cos", (0.7,)), par_inf)]
        for frame, spec, finf in combos:
            _, kd = self.kernel_for(frame, spec, finf)
            val = kd.extremal(np.asarray(frame.z0, dtype=complex))
            assert abs(val - 1.0) < 1e-10

    def test_nu_is_inverse_diagonal(self, seg_2i, seg_inf):
        _, kd = self.kernel_for(seg_2i, MeasureSpec("quad_bump"), seg_inf)
        diag = complex(kd.kernel(np.asarray(seg_2i.z0, complex), seg_2i.z0))
        assert abs(diag.imag) < 1e-14 * abs(diag)
        assert 1.0 / diag.real == pytest.approx(kd.nu, rel=1e-10)
        assert kd.diag0 == pytest.approx(diag.real, rel=1e-10)

    def test_nu_formula(self, seg_2i, seg_inf):
        sz, kd = self.kernel_for(seg_2i, MeasureSpec("exp_cos", (0.9,)),
                                 seg_inf)
        want = 2.0 * np.pi * sz.R_f.at_base() * sz.R.at_base()
        assert kd.nu == pytest.approx(want, rel=1e-9)

    def test_chebyshev_nu_is_two(self, seg_inf):
        _, kd = self.kernel_for(seg_inf, MeasureSpec("one"), None)
        assert kd.nu == pytest.approx(2.0, rel=1e-10)
        assert kd.kw_diag == pytest.approx(0.5, rel=1e-10)

    def test_two_kernel_formulas_agree(self, seg_2i, seg_inf):
        # rep_kern through tracked sqrt(Phi'/R_mu) vs the Moebius form
        _, kd = self.kernel_for(seg_2i, MeasureSpec("quad_bump"), seg_inf)
        zs = np.array([0.3 + 0.8j, -1.2 + 0.6j, 1.8 + 0.5j, 0.1 + 2.2j,
                       -0.6 + 1.4j, 2.6 + 1.0j, 0.9 + 0.35j, -1.8 + 1.1j])
        for w in (0.6 + 1.1j, -0.4 + 1.7j):
            k1 = kd.kernel(zs, w)
            k2 = kd.kernel_crosscheck(zs, w)
            assert np.max(np.abs(k1 - k2) / np.abs(k1)) < 1e-8

    def test_chebyshev_kernel_closed_form(self, seg_inf):
        # f = 1 on [-1,1]: S = 1/sqrt(pi), K(z,w) = (1/2)/(1 - u conj(u_w))
        _, kd = self.kernel_for(seg_inf, MeasureSpec("one"), None)
        t = np.linspace(0.1, 0.9, 17)
        for side in (1, -1):
            for w in (0.5 + 1.2j, 3.0j):
                uw = 1.0 / complex(seg_inf.Phi(np.asarray(w, complex)))
                u = 1.0 / boundary_phi_phase(seg_inf, t, side)
                want = 0.5 / (1.0 - u * np.conj(uw))
                got = kd.kernel_boundary(t, side, w)
                assert np.max(np.abs(got - want)) < 1e-12

    def test_reproducing_property(self, seg_inf, seg_2i):
        combos = [(seg_inf, MeasureSpec("one"), None),
                  (seg_2i, MeasureSpec("quad_bump"), seg_inf)]
        for frame, spec, finf in combos:
            ip = transplant_quadrature(frame, spec, M=4096, frame_inf=finf)
            _, kd = self.kernel_for(frame, spec, finf)
            ph = boundary_phi_phase(frame, ip.t, ip.side)
            for p in (0, 1, 2):
                gv = ph ** (-p)
                for w in INTERIOR_W:
                    kv = kd.kernel_boundary(ip.t, ip.side, w)
                    got = ip.dot(gv, kv, mode="hardy", include_atoms=False)
                    want = complex(frame.Phi(np.asarray(w, complex))) ** (-p)
                    assert abs(got - want) / abs(want) < 1e-7

    def test_outer_function_of_lemma_formula(self, seg_2i, seg_inf):
        # R Phi^2 B' / (R_rho B^2) is a unimodular constant
        sz, _ = self.kernel_for(seg_2i, MeasureSpec("one"), seg_inf)
        pts = np.array([0.4 + 1.1j, -0.9 + 0.8j, 2.2 + 0.6j, 2.4j,
                        -1.6 + 1.3j, 0.2 - 1.5j])
        ratio = (sz.R(pts) * seg_2i.Phi(pts) ** 2 * seg_2i.dBfun(pts)
                 / (sz.R_rho(pts) * seg_2i.Bfun(pts) ** 2))
        assert np.max(np.abs(np.abs(ratio) - 1.0)) < 1e-9
        assert np.max(np.abs(ratio - np.mean(ratio))) < 1e-9

    def test_extremal_square_bounded_by_density(self, seg_2i, seg_inf):
        # |F|^2 f stays below one constant over a family of measures
        t = np.linspace(0.02, 0.98, 197)
        for spec in (MeasureSpec("one"), MeasureSpec("quad_bump"),
                     MeasureSpec("exp_cos", (1.2,))):
            sz, kd = self.kernel_for(seg_2i, spec, seg_inf)
            fvals = rebased_density(seg_2i, seg_inf, spec, t)
            for side in (1, -1):
                fb = kd.extremal_boundary(t, side)
                assert np.max(np.abs(fb) ** 2 * fvals) < 4.0

    def test_hn_chebyshev_oracle(self, seg_inf, unit_segment):
        # f = 1 gives F = 1, so H_n = 2 cos(n theta) = 2 T_n(x)
        _, kd = self.kernel_for(seg_inf, MeasureSpec("one"), None)
        t = np.linspace(0.07, 0.93, 9)
        x = np.real(unit_segment.gamma(t))
        for n, tn in [(1, x), (2, 2 * x ** 2 - 1), (3, 4 * x ** 3 - 3 * x)]:
            got = kd.hn(n, t)
            assert np.max(np.abs(got - 2.0 * tn)) < 1e-8

    def test_branch_audit_detects_flip(self):
        theta = 2.0 * np.pi * (np.arange(64) + 0.5) / 64
        side = np.where(theta < np.pi, 1, -1)
        vals = np.exp(0.05j * np.sin(theta))
        szego._check_branch(vals, side)
        flipped = vals.copy()
        flipped[10:] = -flipped[10:]
        with pytest.raises(ValueError, match="branch tracking failed"):
            szego._check_branch(flipped, side)


class TestWidomLimit:

    def test_chebyshev_limit_is_two(self, seg_inf):
        sz = szego.szego_data(seg_inf, MeasureSpec("one"))
        a, b = szego.widom_limit_rhs(seg_inf, sz)
        assert a == pytest.approx(2.0, rel=1e-10)
        assert b == pytest.approx(2.0, rel=1e-10)

    def test_formula_identity_across_configs(self, seg_inf, seg_2i):
        combos = [(seg_inf, MeasureSpec("one"), None),
                  (seg_inf, MeasureSpec("jacobi", (0.5, 0.5)), None),
                  (seg_2i, MeasureSpec("one"), seg_inf),
                  (seg_2i, MeasureSpec("quad_bump"), seg_inf),
                  (seg_2i, MeasureSpec("quad_bump", atoms=[(0.37, 0.5)]),
                   seg_inf)]
        for frame, spec, finf in combos:
            sz = szego.szego_data(frame, spec, frame_inf=finf)
            a, b = szego.widom_limit_rhs(frame, sz, frame_inf=finf)
            assert a == pytest.approx(b, rel=1e-9)

    def test_atoms_leave_limit_unchanged(self, seg_2i, seg_inf):
        spec = MeasureSpec("quad_bump", atoms=[(0.37, 0.5)])
        sz_a = szego.szego_data(seg_2i, spec, frame_inf=seg_inf)
        sz_p = szego.szego_data(seg_2i, spec.without_atoms(),
                                frame_inf=seg_inf)
        got = szego.widom_limit_rhs(seg_2i, sz_a, frame_inf=seg_inf)
        want = szego.widom_limit_rhs(seg_2i, sz_p, frame_inf=seg_inf)
        assert got == want

    def test_parabola_identity(self, par_base, par_inf):
        sz = szego.szego_data(par_base, MeasureSpec("exp_cos", (0.7,)),
                              frame_inf=par_inf)
        a, b = szego.widom_limit_rhs(par_base, sz, frame_inf=par_inf)
        assert a == pytest.approx(b, rel=1e-9)
