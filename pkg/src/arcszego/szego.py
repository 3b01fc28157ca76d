"""Outer functions on the arc complement and the kernel built from them.

Everything here lives on the transplanted disk: u = 1/Phi_{z0}(z) maps the
domain conformally onto |u| < 1, with u = 0 the point at infinity and the
base point sitting at u0 = 1/Phi_{z0}(z0) (u0 = 0 for the frame based at
infinity).  An outer function with prescribed boundary modulus g is
reconstructed from log g through its Herglotz power series in u, sampled
on the half-offset uniform grid in the Phi angle so a plain FFT plus the
half-step twiddle yields the coefficients.

Endpoint singularities of the data are never fed to the FFT.  Each factor
|z - E|^a (E an endpoint) is the boundary modulus of (1 - q u)^{2a} times
a smooth function, where q is the unimodular Phi angle of E, so the
singular part enters the Herglotz sum as an exact 2a Log(1 - q u) term
and only the smooth residual is transformed.  Without the split the
midpoint rule loses about five digits to each log singularity.

Square roots and quotients of outer functions are taken on the Herglotz
data (half or negated coefficients), never pointwise, so no square-root
branch has to be tracked; the adjacent-node continuity audit required of
the kernel constructor is kept as a defensive check.
"""

import numpy as np

from . import _kernels
from .conformal import build_frame, harmonic_density
from .measure import szego_log_mean, widom_log_mean

_BRANCH_FAIL = "square-root branch tracking failed"
_UNDEFINED = "strong asymptotics undefined (R_f = 0)"
_CLIP = 1e-300          # density clip used inside the log integrals
_FLOOR = 1e-290         # "sitting at the clip" sentinel for the gate
_FLOOR_FRACTION = 1.0 / 64.0
_RADIAL = 1.0 - 1e-8    # radius of the radial boundary limits


def _base_u(frame):
    if frame.z0 is None:
        return 0.0 + 0.0j
    return 1.0 / frame.Phi0 + 0.0j


def _phi_grid(frame, M):
    """Half-offset uniform grid in the Phi angle with its arc data."""
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    tw = theta - frame.beta
    z, t, side = frame.arc_from_theta_w(tw)
    # nodes can land arbitrarily close to an endpoint; keep t interior
    t = np.clip(t, 1e-14, 1.0 - 1e-14)
    return theta, tw, z, t, side


def _edge_phases(frame):
    """Unimodular Phi angles q_A, q_B of the two endpoints."""
    chi_a = frame.oc.chi_of_psi(0.0)
    chi_b = frame.oc.chi_of_psi(np.pi)
    th_a = frame.ext.theta_of_chi(chi_a)
    th_b = frame.ext.theta_of_chi(chi_b)
    return (np.exp(1j * (th_a + frame.beta)),
            np.exp(1j * (th_b + frame.beta)))


def _edges_for(frame, exponents):
    a, b = exponents
    if not a and not b:
        return ()
    qa, qb = _edge_phases(frame)
    out = []
    if a:
        out.append((qa, float(a)))
    if b:
        out.append((qb, float(b)))
    return tuple(out)


def _trim(c, rel=1e-13, floor=1e-14):
    mags = np.abs(c)
    cut = max(rel * mags.max(), floor)
    keep = np.flatnonzero(mags > cut)
    n = int(keep[-1]) + 1 if keep.size else 1
    return np.ascontiguousarray(c[:n], dtype=complex)


class OuterFunction:
    """Outer function, positive at the frame's base point.

    The stored data is the Herglotz power series H(u) = sum c_k u^k whose
    real part matches the log boundary modulus, plus closed-form endpoint
    terms 2 w Log(1 - q u); the value is exp(H(u) - i Im H(u0)).  The
    ``zero`` flag marks the zero function returned when the Szego
    condition fails.
    """

    def __init__(self, frame, coeffs, edges=(), u0=0j, zero=False):
        self.frame = frame
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.edges = tuple(edges)
        self.u0 = complex(u0)
        self.is_zero = bool(zero)
        self.im0 = 0.0 if zero else float(
            np.imag(self._raw_log(np.array([self.u0]))[0]))

    def _raw_log(self, u):
        out = _kernels.eval_power_series(self.coeffs, u)
        for q, wgt in self.edges:
            # 1 - q u has positive real part on |u| < 1; principal log safe
            out = out + (2.0 * wgt) * np.log(1.0 - q * u)
        return out

    def eval_u(self, u):
        u = np.asarray(u, dtype=complex)
        flat = np.atleast_1d(u)
        if self.is_zero:
            vals = np.zeros(flat.shape, dtype=complex)
        else:
            vals = np.exp(self._raw_log(flat) - 1j * self.im0)
        return vals.reshape(u.shape) if u.ndim else complex(vals[0])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.eval_u(1.0 / self.frame.Phi(z))

    def boundary(self, t, side, r=_RADIAL):
        """Radial boundary values at arc parameters t on the given side."""
        tw = self.frame.theta_w_from_arc(t, side)
        return self.eval_u(r * np.exp(-1j * (np.asarray(tw) + self.frame.beta)))

    def at_base(self):
        """The (real positive) value at the base point; 0 when flagged."""
        if self.is_zero:
            return 0.0
        return float(np.exp(np.real(self._raw_log(np.array([self.u0]))[0])))

    def power(self, alpha):
        return OuterFunction(self.frame, self.coeffs * alpha,
                             [(q, w * alpha) for q, w in self.edges],
                             self.u0, zero=self.is_zero)

    def __mul__(self, other):
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[:self.coeffs.size] = self.coeffs
        c[:other.coeffs.size] += other.coeffs
        return OuterFunction(self.frame, c, self.edges + other.edges,
                             self.u0, zero=self.is_zero or other.is_zero)


def _zero_outer(frame):
    return OuterFunction(frame, np.zeros(1), (), _base_u(frame), zero=True)


def _outer_from_data(frame, theta, logvals, edges, u0):
    """Herglotz series from log-modulus samples on the half-offset grid."""
    M = theta.size
    L = np.asarray(logvals, dtype=float).copy()
    for q, wgt in edges:
        L -= (2.0 * wgt) * np.log(np.abs(1.0 - q * np.exp(-1j * theta)))
    F = np.fft.fft(L)
    k = np.arange(1, M // 2)
    coeffs = np.empty(M // 2, dtype=complex)
    coeffs[0] = F[0].real / M
    coeffs[1:] = 2.0 * np.exp(1j * k * np.pi / M) * F[M - k] / M
    return OuterFunction(frame, _trim(coeffs), edges, u0)


def szego_function(frame, ip, g, exponents=(0.0, 0.0), M=4096):
    """Outer function with boundary modulus g, positive at the base point.

    ``g`` is a callable (z, t, side) -> positive samples, including any
    endpoint factors; ``exponents`` declares the |z-A|^a |z-B|^b powers it
    carries so they can be split off in closed form.  The Szego gate is
    evaluated on the nodes of ``ip``; failure returns the zero function
    with ``is_zero`` set instead of raising.
    """
    vals = np.asarray(g(ip.z, ip.t, ip.side), dtype=float)
    gate = float(np.mean(np.log(np.maximum(vals, _CLIP))))
    frac = float(np.mean(vals <= _FLOOR))
    if not (gate > -1e6) or frac > _FLOOR_FRACTION:
        return _zero_outer(frame)
    theta, tw, z, t, side = _phi_grid(frame, M)
    L = np.log(np.maximum(np.asarray(g(z, t, side), dtype=float), _CLIP))
    return _outer_from_data(frame, theta, L, _edges_for(frame, exponents),
                            _base_u(frame))


class SzegoFunctions:
    """The outer functions attached to one measure in one frame.

    R_f has boundary modulus f_{z0} (the density against the frame's
    harmonic measure), R_rho that of the total harmonic density, R that
    of rho_{z0}/|B'| per side.  R_f is the zero function when the Szego
    condition fails.
    """

    def __init__(self, frame, spec, R_f, R_rho, R, ok, log_integral):
        self.frame = frame
        self.spec = spec
        self.R_f = R_f
        self.R_rho = R_rho
        self.R = R
        self.szego_condition_ok = bool(ok)
        self.log_integral = float(log_integral)

    @property
    def R_mu(self):
        return self.R_f * self.R_rho


def szego_data(frame, spec, M=4096, frame_inf=None):
    """Build the Szego functions of the measure in the given frame."""
    hm = harmonic_density(frame)
    if frame.z0 is None:
        hm_inf = hm
    else:
        if frame_inf is None:
            frame_inf = build_frame(frame.arc, None)
        hm_inf = harmonic_density(frame_inf)
    log_int = szego_log_mean(frame, spec, frame_inf=frame_inf)
    theta, tw, z, t, side = _phi_grid(frame, M)
    u0 = _base_u(frame)
    arc = frame.arc

    smooth = spec.smooth(t)
    frac = float(np.mean(smooth <= _FLOOR))
    ok = (log_int > -1e6) and frac <= _FLOOR_FRACTION
    if ok:
        vals = spec.log_smooth(t)
        if frame.z0 is not None:
            vals = vals + np.log(hm_inf.density(t) / hm.density(t))
        a, b = spec.exponents
        if a:
            vals = vals + a * np.log(np.abs(z - arc.A))
        if b:
            vals = vals + b * np.log(np.abs(z - arc.B))
        R_f = _outer_from_data(frame, theta, vals, _edges_for(frame, (a, b)),
                               u0)
    else:
        R_f = _zero_outer(frame)

    rho = hm.density(t)
    R_rho = _outer_from_data(frame, theta, np.log(rho),
                             _edges_for(frame, (-0.5, -0.5)), u0)
    R = _outer_from_data(frame, theta,
                         np.log(rho / frame.abs_dB_boundary(tw)), (), u0)
    return SzegoFunctions(frame, spec, R_f, R_rho, R, ok, log_int)


def _komega_diag(frame, R, M=1024):
    """K_omega(z0, z0) through the f = 1 code path."""
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    one = _outer_from_data(frame, theta, np.zeros(M), (), _base_u(frame))
    return 1.0 / (2.0 * np.pi * one.at_base() * R.at_base())


def _check_branch(vals, side):
    """Audit adjacent-node phase jumps of a square root on the boundary.

    The modulus varies arbitrarily fast near the endpoints (legitimately,
    through the |z - E| powers), so only the phase is audited, and only
    between nodes on the same side of the arc: the two seam pairs at the
    endpoints carry a genuine phase offset between the side limits.
    """
    vals = np.asarray(vals)
    mags = np.abs(vals)
    ok = mags > 1e-200
    unit = np.where(ok, vals / np.where(ok, mags, 1.0), 0.0)
    side = np.asarray(side)
    same = (side == np.roll(side, -1)) & ok & np.roll(ok, -1)
    jump = np.abs(np.roll(unit, -1) - unit)[same]
    if jump.size and float(jump.max()) > 0.5:
        raise ValueError(_BRANCH_FAIL)


class KernelData:
    """Reproducing kernel of the measure and its extremal companions.

    Carries the kernel evaluator K_mu, its diagonal value at the base
    point, the harmonic-measure diagonal K_omega(z0, z0), nu, the
    extremal function F with its radial boundary values, and the
    two-sided comparison function H_n on the arc.
    """

    def __init__(self, frame, sz, M=4096):
        if sz.R_f.is_zero:
            raise ValueError(_UNDEFINED)
        self.frame = frame
        self.sz = sz
        self.S = (sz.R_f * sz.R).power(0.5)
        self.s0 = self.S.at_base()
        self.nu = 2.0 * np.pi * self.s0 ** 2
        self.diag0 = 1.0 / self.nu
        self.kw_diag = _komega_diag(frame, sz.R)
        theta, tw, z, t, side = _phi_grid(frame, M)
        _check_branch(self.S.boundary(t, side), side)

    # extremal function ---------------------------------------------------

    def extremal(self, z):
        """F_{mu,z0}(z) = sqrt(R_f(z0) R(z0) / (R_f(z) R(z)))."""
        return self.s0 / self.S(z)

    def extremal_boundary(self, t, side, r=_RADIAL):
        return self.s0 / self.S.boundary(t, side, r)

    def hn_factors(self, t):
        """Phi angles and F values on both sides at arc parameters t."""
        out = {}
        for side in (1, -1):
            tw = np.asarray(self.frame.theta_w_from_arc(t, side))
            th = tw + self.frame.beta
            out[side] = (th, self.s0 / self.S.eval_u(
                _RADIAL * np.exp(-1j * th)))
        return out

    def hn(self, n, t, factors=None):
        """H_n(z) = Phi_+^n F_+ + Phi_-^n F_- at arc parameters t."""
        fac = self.hn_factors(t) if factors is None else factors
        (thp, fp), (thm, fm) = fac[1], fac[-1]
        return np.exp(1j * n * thp) * fp + np.exp(1j * n * thm) * fm

    # kernel --------------------------------------------------------------

    def _pair_factor(self, pz, pwc):
        prod = pz * pwc
        if self.frame.z0 is None:
            return prod / (prod - 1.0)
        p0 = self.frame.Phi0
        return ((pz * p0 - 1.0) * (p0 * pwc - 1.0)
                / ((p0 * p0 - 1.0) * (prod - 1.0)))

    def kernel(self, z, w):
        """K_mu(z, w) for finite z (scalar or array) and scalar w."""
        pw = complex(self.frame.Phi(np.asarray(w, dtype=complex)))
        sw = complex(self.S(np.asarray(w, dtype=complex)))
        pz = self.frame.Phi(z)
        return (self._pair_factor(pz, np.conj(pw))
                / (2.0 * np.pi * self.S(z) * np.conj(sw)))

    def kernel_boundary(self, t, side, w, r=1.0):
        """Boundary values of K_mu(., w) at arc nodes (t, side).

        Evaluated on |u| = 1 itself: the exp form is finite away from the
        endpoint phases, and the radial offset used for F would get
        amplified by the endpoint factors of S.
        """
        pw = complex(self.frame.Phi(np.asarray(w, dtype=complex)))
        sw = complex(self.S(np.asarray(w, dtype=complex)))
        tw = np.asarray(self.frame.theta_w_from_arc(t, side))
        th = tw + self.frame.beta
        sb = self.S.eval_u(r * np.exp(-1j * th))
        pz = np.exp(1j * th)
        return (self._pair_factor(pz, np.conj(pw))
                / (2.0 * np.pi * sb * np.conj(sw)))

    def kernel_crosscheck(self, z, w, zref=None, steps=257):
        """K_mu(z, w) through sqrt(Phi'/R_mu), tracked from a far anchor.

        The straight tracking paths from the anchor must avoid the arc;
        the default anchor sits far out in a generic direction.
        """
        frame = self.frame
        rmu = self.sz.R_mu
        if zref is None:
            c = (frame.arc.A + frame.arc.B) / 2.0
            zref = c + (frame.arc.B - frame.arc.A) * (17.0 + 11.0j)

        def g(p):
            return frame.dPhi(p) / rmu(p)

        def tracked(target):
            path = zref + (target - zref) * np.linspace(0.0, 1.0, steps)
            vals = g(path)
            return np.sqrt(vals[0]) * np.prod(np.sqrt(vals[1:] / vals[:-1]))

        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z)
        sq = np.array([tracked(p) for p in flat])
        sw = tracked(complex(w))
        pz = frame.Phi(flat)
        pw = complex(frame.Phi(np.asarray(w, dtype=complex)))
        out = (sq * np.conj(sw)
               / (2.0 * np.pi * (1.0 - 1.0 / (pz * np.conj(pw)))))
        return out.reshape(z.shape) if z.ndim else complex(out[0])


def kernel(frame, sz, M=4096):
    """KernelData for the measure's Szego functions; requires R_f != 0."""
    return KernelData(frame, sz, M=M)


def widom_limit_rhs(frame, sz, spec=None, M=4096, frame_inf=None):
    """Both closed forms of the Widom limit, as a (formula A, formula B) pair.

    Formula A is the conformal expression with the log integral of the
    arclength density of mu_ac; formula B is R_f(z0)/K_omega(z0, z0).  At
    base point infinity the Moebius factor is 1 and |Phi'(infinity)| is
    read as the reciprocal capacity.  R_f = 0 gives (0, 0).
    """
    if spec is None:
        spec = sz.spec
    if sz.R_f.is_zero:
        return 0.0, 0.0
    wmean = widom_log_mean(frame, spec, M=M, frame_inf=frame_inf)
    if frame.z0 is None:
        a_val = 2.0 * np.pi * frame.cap * np.exp(wmean)
    else:
        a_val = ((1.0 - frame.Phi0 ** -2)
                 * 2.0 * np.pi / abs(frame.dPhi(frame.z0))
                 * np.exp(wmean))
    b_val = sz.R_f.at_base() / _komega_diag(frame, sz.R)
    return float(a_val), float(b_val)
