"""Exterior conformal frames for an opened arc.

The opened curve Gamma' bounds an exterior domain that we map onto the
outside of the unit disk. For a straight arc Gamma' is already the unit
circle and everything below is closed form. For a general arc the map is
computed by Theodorsen iteration on the polar chart of Gamma'.

Two normalized frames matter downstream. ``Phi`` maps the exterior of the
arc onto \\{|w|>1\\} and is rotated so that its derivative at the base point
is positive (at infinity) or so that Phi(z0) is real positive (finite base
points, where Phi still fixes infinity). ``B`` composes Phi with the disk
automorphism that sends Phi(z0) to infinity, so harmonic measure at z0
pulls back to normalized Lebesgue measure on the B-circle.
"""

import numpy as np

from . import _kernels
from .geometry import OpenedCurve, _band

_WILD = "curve too far from circular; refine or use segment tier"
_NTHEO = 4096

_eval_band = OpenedCurve._eval_series


def _wrap(a):
    """Wrap angles to (-pi, pi]."""
    w = np.mod(np.asarray(a, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    if w.ndim:
        w[w == -np.pi] = np.pi
        return w
    return float(w) if w != -np.pi else np.pi


class ExteriorMap:
    """Exterior map F of \\{|w|>1\\} onto the outside of Gamma'.

    F(w) = w exp(c0 + sum_k c_k w^{-k}) with F'(inf) = e^{c0} > 0, plus
    the boundary correspondence chi(theta) = theta + v(theta) between the
    w-circle angle and the polar angle of Gamma'.
    """

    def __init__(self, oc, c0, fcoeffs, v_band, v_hat, z_band, z_hat):
        self.oc = oc
        self.c0 = float(c0)
        self.fcoeffs = np.asarray(fcoeffs, dtype=complex)
        self._v_band = v_band
        self._v_hat = v_hat
        self._dv_hat = v_hat * (1j * v_band)
        self._z_band = z_band
        self._z_hat = z_hat
        self._dz_hat = z_hat * (1j * z_band)

    # boundary correspondence -------------------------------------------

    def chi_of_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self._v_hat.size == 0:
            return theta + 0.0
        flat = np.atleast_1d(theta)
        out = flat + _eval_band(self._v_band, self._v_hat, flat).real
        return out.reshape(theta.shape) if theta.ndim else float(out[0])

    def theta_of_chi(self, chi):
        chi = np.asarray(chi, dtype=float)
        if self._v_hat.size == 0:
            return chi + 0.0
        flat = np.atleast_1d(chi).astype(float)
        th = flat.copy()
        for _ in range(60):
            r = th + _eval_band(self._v_band, self._v_hat, th).real - flat
            dr = 1.0 + _eval_band(self._v_band, self._dv_hat, th).real
            step = r / dr
            th -= step
            if np.max(np.abs(step)) < 1e-14:
                break
        return th.reshape(chi.shape) if chi.ndim else float(th[0])

    # boundary of Omega as a function of the w-circle angle -------------

    def z_of_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = _eval_band(self._z_band, self._z_hat, theta)
        return out.reshape(theta.shape) if theta.ndim else complex(out[0])

    def dz_of_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = _eval_band(self._z_band, self._dz_hat, theta)
        return out.reshape(theta.shape) if theta.ndim else complex(out[0])

    # point evaluation ---------------------------------------------------

    def F(self, w):
        w = np.asarray(w, dtype=complex)
        if self.fcoeffs.size <= 1:
            return w * np.exp(self.c0)
        h = _kernels.eval_power_series(self.fcoeffs, 1.0 / w)
        return w * np.exp(h)

    def dF(self, w):
        w = np.asarray(w, dtype=complex)
        if self.fcoeffs.size <= 1:
            return np.full(w.shape, np.exp(self.c0), dtype=complex)
        k = np.arange(self.fcoeffs.size, dtype=float)
        dh = -_kernels.eval_power_series(self.fcoeffs * k, 1.0 / w) / w
        return self.F(w) * (1.0 / w + dh)

    def Psi(self, s):
        """Inverse of F on the exterior, by Newton from the asymptote."""
        s = np.asarray(s, dtype=complex)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        w = s * np.exp(-self.c0)
        if self.fcoeffs.size > 1:
            tol = 1e-13 * (1.0 + np.abs(s))
            for _ in range(60):
                step = (self.F(w) - s) / self.dF(w)
                w = w - step
                if np.all(np.abs(step) <= tol):
                    break
            else:
                raise ValueError("exterior map inversion failed")
        return complex(w[0]) if scalar else w

    def dPsi(self, s):
        return 1.0 / self.dF(self.Psi(s))


def exterior_map_for(oc, n=_NTHEO, damping=0.5, maxiter=200):
    """Solve the boundary correspondence for Gamma' and package the map."""
    theta = 2.0 * np.pi * np.arange(n) / n
    freq = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    mult = 1j * np.sign(freq)
    if oc.is_circle:
        chi = theta
        u = np.zeros(n)
    else:
        # the moving-point evaluations dominate; freeze log rho(chi) into a
        # banded series once instead of inverting the polar chart per sweep
        lr_band, lr_hat = _band(np.fft.fft(np.log(oc.radius_at(theta))) / n)

        def logr(x):
            return _eval_band(lr_band, lr_hat, x).real

        chi = theta.copy()
        for _ in range(maxiter):
            u = logr(chi)
            v = np.fft.ifft(mult * np.fft.fft(u)).real
            target = theta + v
            step = np.max(np.abs(target - chi))
            chi = (1.0 - damping) * chi + damping * target
            if step < 1e-13:
                break
        else:
            raise ValueError(_WILD)
        if np.any(np.diff(np.concatenate([chi, [chi[0] + 2 * np.pi]])) <= 0):
            raise ValueError(_WILD)
        u = logr(chi)
    uh = np.fft.fft(u) / n
    c0 = uh[0].real
    # coefficients of log(F/w): c_k pairs with w^{-k}, i.e. mode -k of u
    kmax = 0
    cut = max(1e-13 * np.max(np.abs(uh)), 1e-14)
    for k in range(n // 2 - 1, 0, -1):
        if abs(uh[n - k]) > cut:
            kmax = k
            break
    fcoeffs = np.zeros(kmax + 1, dtype=complex)
    fcoeffs[0] = c0
    for k in range(1, kmax + 1):
        fcoeffs[k] = 2.0 * uh[n - k]
    v_band, v_hat = _band(mult * uh)
    s_bdry = oc.radius_at(chi) * np.exp(1j * chi)
    z_band, z_hat = _band(np.fft.fft(oc.phi(s_bdry)) / n)
    return ExteriorMap(oc, c0, fcoeffs, v_band, v_hat, z_band, z_hat)


class ConformalFrame:
    """Exterior map data normalized at a base point z0 (None = infinity)."""

    def __init__(self, arc, oc, ext, z0):
        self.arc = arc
        self.oc = oc
        self.ext = ext
        self.z0 = z0
        d = oc.d
        omega = np.exp(-ext.c0) * 2.0 / d
        self.rot = np.conj(omega) / abs(omega)
        self.deriv_inf = abs(omega)  # Phi_inf'(infinity), real positive
        if z0 is None:
            self.lam = 1.0 + 0.0j
            self.Phi0 = None
            self.cB = 1.0 + 0.0j
            self.cap = 1.0 / self.deriv_inf
        else:
            p = self._phi_inf(z0)
            self.Phi0 = abs(p)
            if self.Phi0 <= 1.0 + 1e-12:
                raise ValueError("base point on arc")
            self.lam = np.conj(p) / self.Phi0
            # the unimodular factor making lim z (B(z) - B(inf)) positive:
            # B - B(inf) ~ cB (Phi0^2-1) / (lam * deriv_inf * z)
            self.cB = self.lam
            self.cap = 1.0 / self.Phi0
        self.beta = float(np.angle(self.rot * self.lam))

    # point maps ---------------------------------------------------------

    def _phi_inf(self, z):
        return self.rot * self.ext.Psi(self.oc.phi_inv(z))

    def Phi(self, z):
        """The normalized exterior map of the arc complement."""
        return self.lam * self._phi_inf(z)

    def dPhi(self, z):
        s = self.oc.phi_inv(z)
        return self.lam * self.rot * self.ext.dPsi(s) * self.oc.dphi_inv(z)

    def mobius(self, zeta):
        """Involution of \\{|zeta|>1\\} swapping Phi0 and infinity."""
        return (zeta * self.Phi0 - 1.0) / (zeta - self.Phi0)

    def Bfun(self, z):
        """Blaschke-type frame with pole at z0; equals Phi for z0 = inf."""
        if self.z0 is None:
            return self.Phi(z)
        return self.cB * self.mobius(self.Phi(z))

    def dBfun(self, z):
        if self.z0 is None:
            return self.dPhi(z)
        ph = self.Phi(z)
        return self.cB * (1.0 - self.Phi0 ** 2) / (ph - self.Phi0) ** 2 \
            * self.dPhi(z)

    # boundary angle charts ----------------------------------------------
    #
    # theta_w: angle on the w-circle of the bare exterior map
    # theta_B: angle on the B-circle (harmonic measure is dtheta_B / 2pi)

    def theta_w_from_arc(self, t, side):
        t = np.asarray(t, dtype=float)
        psi = np.arccos(np.clip(1.0 - 2.0 * t, -1.0, 1.0))
        psi = np.where(np.asarray(side) > 0, psi, 2.0 * np.pi - psi)
        chi = self.oc.chi_of_psi(psi)
        return self.ext.theta_of_chi(chi)

    def arc_from_theta_w(self, theta):
        chi = _wrap(self.ext.chi_of_theta(np.asarray(theta, dtype=float)))
        side = np.where(chi >= 0.0, 1, -1)
        t = self.oc.t_of_chi(chi)
        z = self.oc.phi(self.oc.radius_at(chi) * np.exp(1j * chi))
        return z, t, side

    def theta_B_from_theta_w(self, theta):
        zeta = np.exp(1j * (np.asarray(theta, dtype=float) + self.beta))
        if self.z0 is None:
            return np.angle(zeta)
        return np.angle(self.cB * self.mobius(zeta))

    def theta_w_from_theta_B(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.z0 is None:
            return theta - self.beta
        zeta = self.mobius(np.exp(1j * theta) / self.cB)
        return np.angle(zeta) - self.beta

    # boundary derivative magnitudes -------------------------------------

    def abs_dz_dtheta_w(self, theta):
        return np.abs(self.ext.dz_of_theta(theta))

    def abs_dPhi_boundary(self, theta_w):
        """|Phi'| at the boundary point with w-angle theta_w."""
        return 1.0 / self.abs_dz_dtheta_w(theta_w)

    def abs_dB_boundary(self, theta_w):
        """|B'| at the boundary point with w-angle theta_w."""
        g = self.abs_dPhi_boundary(theta_w)
        if self.z0 is None:
            return g
        zeta = np.exp(1j * (np.asarray(theta_w, dtype=float) + self.beta))
        return g * (self.Phi0 ** 2 - 1.0) / np.abs(zeta - self.Phi0) ** 2


def build_frame(arc, z0=None, nodes=_NTHEO):
    """Open the arc, solve for the exterior map, normalize at z0."""
    if z0 is not None:
        z0 = complex(z0)
        if arc.distance_to(z0) < 1e-9:
            raise ValueError("base point on arc")
    from .geometry import open_arc
    oc = open_arc(arc)
    ext = exterior_map_for(oc, n=nodes)
    return ConformalFrame(arc, oc, ext, z0)


class HarmonicMeasure:
    """Harmonic measure of the arc complement at the frame's base point.

    The measure lives on the two-sided arc; ``side_density`` is the
    arclength density contributed by one side, ``density`` their sum.
    """

    def __init__(self, frame):
        self.frame = frame

    def _check_interior(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0) or np.any(t >= 1.0):
            raise ValueError("endpoint singularity")
        return t

    def side_density(self, t, side):
        t = self._check_interior(t)
        tw = self.frame.theta_w_from_arc(t, side)
        return self.frame.abs_dB_boundary(tw) / (2.0 * np.pi)

    def density(self, t):
        return self.side_density(t, 1) + self.side_density(t, -1)

    def regularized(self, t):
        """density(t) * sqrt(|z-A| |z-B|), bounded at the endpoints."""
        t = self._check_interior(t)
        z = self.frame.arc.gamma(t)
        w = np.sqrt(np.abs(z - self.frame.arc.A) * np.abs(z - self.frame.arc.B))
        return self.density(t) * w

    def mass(self, n=4096):
        """Total integral against arclength; equals 1 up to quadrature."""
        eta = np.pi * (np.arange(n) + 0.5) / n
        t = (1.0 - np.cos(eta)) / 2.0
        speed = self.frame.arc.arclength_speed(t)
        vals = self.density(t) * speed * np.sin(eta) / 2.0
        return float(np.sum(vals) * np.pi / n)


def harmonic_density(frame):
    return HarmonicMeasure(frame)
