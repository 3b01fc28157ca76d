"""Opening a smooth Jordan arc through the Joukowski-type substitution.

An arc with endpoints A, B is opened by

    phi(s) = ((B - A)(s + 1/s)/2 + A + B)/2,

which maps the exterior of a Jordan curve Gamma' through +-1 onto the
complement of the arc.  For a straight segment Gamma' is the unit circle
and every map below is closed-form; for a curved arc Gamma' is a
perturbed circle sampled from the two roots of the opening quadratic.

The inverse

    phi^{-1}(z) = (2z - A - B)/(B - A) + (2/(B - A)) sqrt((z - A)(z - B))

needs the branch of the square root that behaves like z at infinity and is
cut along the arc itself.  It is fixed by continuity along a ray coming in
from infinity: crossings of the cut system flip the sign of the principal
value, and the crossings are counted exactly against a dense polyline of
the arc.
"""

import cmath
from dataclasses import dataclass

import numpy as np

_DEGENERATE = "degenerate arc"

# dense resolution for the opened-curve series and the arc polyline
_NPSI = 4096
_NPOLY = 4096


@dataclass(frozen=True)
class SidedPoint:
    """A boundary sample: arc point, approach side and opening angle.

    ``side`` is +1 on the side swept by angles in (0, pi), -1 on the
    other, and 0 for the two endpoint samples where the sides meet.
    """

    z: complex
    side: int
    theta: float


class ArcGeometry:
    """A smooth Jordan arc given by endpoints and a parametrization.

    Use :meth:`segment` for straight segments (everything downstream is
    then closed-form) or :meth:`from_samples` for a general arc sampled at
    Chebyshev-spaced parameters.
    """

    def __init__(self, A, B, kind, samples=None):
        A = complex(A)
        B = complex(B)
        if abs(A - B) <= 1e-12:
            raise ValueError(_DEGENERATE)
        self.A = A
        self.B = B
        self.kind = kind
        self._samples = samples
        if samples is not None:
            self._setup_interpolant(samples)
        self._polyline_t = (1.0 - np.cos(np.linspace(0.0, np.pi, _NPOLY + 1))) / 2.0
        self._polyline = self.gamma(self._polyline_t)

    @classmethod
    def segment(cls, A, B):
        return cls(A, B, "segment")

    @classmethod
    def from_samples(cls, samples):
        """Build an arc from rows (t, Re gamma(t), Im gamma(t)).

        The parameters must be Chebyshev-spaced, t_j = (1 - cos(pi j/n))/2,
        so the interpolant is the stable Chebyshev barycentric one.
        """
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 129:
            raise ValueError(
                "general arc needs at least 129 samples of (t, re, im)")
        order = np.argsort(arr[:, 0])
        arr = arr[order]
        t = arr[:, 0]
        n = t.size - 1
        ref = (1.0 - np.cos(np.pi * np.arange(n + 1) / n)) / 2.0
        if np.max(np.abs(t - ref)) > 1e-9:
            raise ValueError("general arc samples must be Chebyshev-spaced")
        vals = arr[:, 1] + 1j * arr[:, 2]
        if np.min(np.abs(np.diff(vals))) == 0.0:
            raise ValueError(_DEGENERATE)
        return cls(vals[0], vals[-1], "general", samples=vals)

    # interpolation of a general parametrization ------------------------

    def _setup_interpolant(self, vals):
        n = len(vals) - 1
        # Chebyshev barycentric weights on the t-grid (psi uniform)
        w = np.ones(n + 1)
        w[1::2] = -1.0
        w[0] *= 0.5
        w[-1] *= 0.5
        self._bary_w = w
        self._bary_t = (1.0 - np.cos(np.pi * np.arange(n + 1) / n)) / 2.0
        self._bary_v = np.asarray(vals, dtype=complex)

    def gamma(self, t):
        """Arc point at parameter t in [0, 1]."""
        t = np.asarray(t, dtype=float)
        if self.kind == "segment":
            return self.A + t * (self.B - self.A)
        tt = np.atleast_1d(t)
        num = np.zeros(tt.shape, dtype=complex)
        den = np.zeros(tt.shape, dtype=float)
        exact = np.full(tt.shape, -1, dtype=int)
        for j, tj in enumerate(self._bary_t):
            d = tt - tj
            hit = np.abs(d) < 1e-15
            exact[hit] = j
            d[hit] = 1.0
            r = self._bary_w[j] / d
            num += r * self._bary_v[j]
            den += r
        out = num / den
        out[exact >= 0] = self._bary_v[exact[exact >= 0]]
        return out if t.ndim else complex(out[0])

    def arclength_speed(self, t, h=1e-6):
        """|gamma'(t)| by central differences away from the endpoints."""
        t = np.asarray(t, dtype=float)
        if self.kind == "segment":
            return np.full(t.shape, abs(self.B - self.A)) if t.ndim \
                else abs(self.B - self.A)
        lo = np.clip(t - h, 0.0, 1.0)
        hi = np.clip(t + h, 0.0, 1.0)
        return np.abs(self.gamma(hi) - self.gamma(lo)) / (hi - lo)

    def distance_to(self, z):
        """Distance from a point to the dense arc polyline."""
        z = complex(z)
        if self.kind == "segment":
            d = (self.B - self.A)
            u = (z - self.A) / d
            x = min(max(u.real, 0.0), 1.0)
            return abs(z - (self.A + x * d))
        p = self._polyline
        a, b = p[:-1], p[1:]
        ab = b - a
        tt = np.clip(((z - a) * np.conj(ab)).real / np.abs(ab) ** 2, 0.0, 1.0)
        j = int(np.argmin(np.abs(z - (a + tt * ab))))
        # refine on the interpolant; the polyline chord sags ~1e-8 off the arc
        tg = self._polyline_t
        lo, hi = tg[max(j - 1, 0)], tg[min(j + 2, tg.size - 1)]
        inv = 2.0 / (1.0 + np.sqrt(5.0))
        x1 = hi - inv * (hi - lo)
        x2 = lo + inv * (hi - lo)
        f1 = abs(self.gamma(x1) - z)
        f2 = abs(self.gamma(x2) - z)
        for _ in range(80):
            if f1 < f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - inv * (hi - lo)
                f1 = abs(self.gamma(x1) - z)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + inv * (hi - lo)
                f2 = abs(self.gamma(x2) - z)
            if hi - lo < 1e-14:
                break
        return min(f1, f2)


class OpenedCurve:
    """The opening data of an arc: phi, its tracked inverse, and Gamma'.

    Fields of interest: ``phi``/``dphi`` (the forward map and derivative),
    ``phi_inv``/``dphi_inv`` (the exterior branch of the inverse and its
    derivative), ``sqrt_ab`` (the branch of sqrt((z-A)(z-B)) asymptotic to
    z), and the Gamma' parametrization s(psi) with its polar charts.
    """

    def __init__(self, arc):
        self.arc = arc
        self.A = arc.A
        self.B = arc.B
        self.c = (arc.A + arc.B) / 2.0
        self.d = (arc.B - arc.A) / 2.0
        self.is_circle = arc.kind == "segment"
        if not self.is_circle:
            self._build_curve_series()

    # forward map -------------------------------------------------------

    def phi(self, s):
        s = np.asarray(s, dtype=complex)
        return self.c + self.d * (s + 1.0 / s) / 2.0

    def dphi(self, s):
        s = np.asarray(s, dtype=complex)
        return self.d * (1.0 - 1.0 / s ** 2) / 2.0

    # the tracked square root ------------------------------------------

    def _principal(self, z):
        # principal sqrt((z-A)(z-B)); branch cut on the chord [A, B]
        u = (np.asarray(z, dtype=complex) - self.c) / self.d
        return self.d * np.sqrt(u - 1.0) * np.sqrt(u + 1.0)

    def _branch_sign(self, z):
        # parity of cut-system crossings along the ray in from infinity
        if self.is_circle:
            return 1.0
        z = complex(z)
        poly = self.arc._polyline
        scale = 4.0 * (np.max(np.abs(poly - self.c)) + abs(self.d))
        direction = (z - self.c) / abs(z - self.c) if abs(z - self.c) > 1e-13 \
            else 1.0 + 0.0j
        for attempt in range(8):
            rot = cmath.exp(1j * 0.37 * attempt)
            far = z + direction * rot * 1e6 * scale
            flips = _count_crossings(far, z, poly)
            chord = _count_crossings(
                far, z, np.array([self.A, self.B], dtype=complex))
            if flips >= 0 and chord >= 0:
                return -1.0 if (flips + chord) % 2 else 1.0
        raise ValueError("branch tracking failed near the arc")

    def sqrt_ab(self, z):
        """sqrt((z-A)(z-B)), cut along the arc, asymptotic to z."""
        z = np.asarray(z, dtype=complex)
        if self.is_circle:
            return self._principal(z)
        flat = np.atleast_1d(z)
        sign = np.array([self._branch_sign(p) for p in flat])
        out = self._principal(flat) * sign
        return out.reshape(z.shape) if z.ndim else complex(out[0])

    def phi_inv(self, z):
        """The exterior branch of the inverse opening map."""
        z = np.asarray(z, dtype=complex)
        return (z - self.c) / self.d + self.sqrt_ab(z) / self.d

    def dphi_inv(self, z):
        """(phi^{-1})'(z) = phi^{-1}(z)/sqrt((z-A)(z-B))."""
        return self.phi_inv(z) / self.sqrt_ab(z)

    # Gamma' as a periodic curve ---------------------------------------

    def _build_curve_series(self):
        m = _NPSI
        psi_half = np.linspace(0.0, np.pi, m // 2 + 1)
        t_half = (1.0 - np.cos(psi_half)) / 2.0
        u = (self.arc.gamma(t_half) - self.c) / self.d
        disc = u * u - 1.0
        h = np.sqrt(disc.astype(complex))
        # track one root branch continuously in t, starting mid-arc
        mid = len(h) // 2
        if (u[mid] + h[mid]).imag < 0:
            h[mid] = -h[mid]
        for j in range(mid + 1, len(h)):
            if abs(h[j] - h[j - 1]) > abs(h[j] + h[j - 1]):
                h[j] = -h[j]
        for j in range(mid - 1, -1, -1):
            if abs(h[j] - h[j + 1]) > abs(h[j] + h[j + 1]):
                h[j] = -h[j]
        s_plus = u + h
        s_plus[0] = -1.0
        s_plus[-1] = 1.0
        # full closed traversal: psi in [0, 2pi), reciprocal on the back half
        s_full = np.concatenate([s_plus[:-1], (1.0 / s_plus[::-1])[:-1]])
        self._s_grid = s_full
        self._s_band, self._s_hat = _band(np.fft.fft(s_full) / m)
        # polar chart: chi(psi) = pi - psi + delta(psi), delta periodic
        psi = 2.0 * np.pi * np.arange(m) / m
        chi = np.unwrap(np.angle(s_full))
        chi = chi - chi[0] + np.pi  # chi(0) = pi at s = -1
        dchi = np.diff(chi)
        if np.any(dchi >= 0.0):
            raise ValueError(
                "curve too far from circular; refine or use segment tier")
        self._d_band, self._delta_hat = _band(np.fft.fft(chi - (np.pi - psi)) / m)
        self._dd_hat = self._delta_hat * (1j * self._d_band)
        # inverse-chart starting values for the Newton solve in psi_of_chi
        self._inv_chi = np.concatenate([[-np.pi], chi[::-1]])
        self._inv_psi = np.concatenate([[2.0 * np.pi], psi[::-1]])

    @staticmethod
    def _eval_series(band, hat, psi):
        pts = np.atleast_1d(np.asarray(psi, dtype=float))
        out = np.empty(pts.size, dtype=complex)
        for lo in range(0, pts.size, 512):
            chunk = pts[lo:lo + 512]
            out[lo:lo + 512] = np.exp(1j * np.outer(chunk, band)) @ hat
        return out

    def s_of_psi(self, psi):
        """Gamma' traversal; psi in [0, pi] is the plus branch."""
        if self.is_circle:
            return np.exp(1j * (np.pi - np.asarray(psi, dtype=float)))
        out = self._eval_series(self._s_band, self._s_hat, psi)
        return out if np.ndim(psi) else complex(out[0])

    def chi_of_psi(self, psi):
        psi = np.asarray(psi, dtype=float)
        if self.is_circle:
            return np.pi - psi
        out = np.pi - np.atleast_1d(psi) + np.real(
            self._eval_series(self._d_band, self._delta_hat, np.atleast_1d(psi)))
        return out.reshape(psi.shape) if psi.ndim else float(out[0])

    def psi_of_chi(self, chi):
        """Invert the monotone polar chart by Newton iteration."""
        chi = np.asarray(chi, dtype=float)
        if self.is_circle:
            return np.pi - chi
        flat = np.atleast_1d(chi).astype(float)
        ps = np.interp(flat, self._inv_chi, self._inv_psi)
        for _ in range(30):
            val = self.chi_of_psi(ps) - flat
            der = -1.0 + np.real(self._eval_series(self._d_band, self._dd_hat, ps))
            step = val / der
            ps = ps - step
            if np.max(np.abs(step)) < 1e-13:
                break
        return ps.reshape(chi.shape) if chi.ndim else float(ps[0])

    def radius_at(self, theta):
        """Polar radius of Gamma' at angle theta (1 on the segment tier)."""
        theta = np.asarray(theta, dtype=float)
        if self.is_circle:
            return np.ones(theta.shape) if theta.ndim else 1.0
        chi = np.mod(np.atleast_1d(theta) + np.pi, 2.0 * np.pi) - np.pi
        psi = self.psi_of_chi(chi)
        r = np.abs(self.s_of_psi(np.atleast_1d(psi)))
        return r.reshape(theta.shape) if theta.ndim else float(r[0])

    def t_of_chi(self, chi):
        """Arc parameter of the boundary point with polar angle chi."""
        psi = np.asarray(self.psi_of_chi(np.abs(np.asarray(chi))))
        return (1.0 - np.cos(psi)) / 2.0


def open_arc(arc):
    """Open an arc; raises ValueError('degenerate arc') on collapsed input."""
    return OpenedCurve(arc)


def boundary_samples(oc, M):
    """Two-sided boundary samples at M equispaced opening angles.

    Angles 0 and pi land exactly on the endpoints B and A; every interior
    arc point appears twice, once per side, as reciprocal points of Gamma'.
    """
    out = []
    for j in range(M):
        theta = 2.0 * np.pi * j / M
        if j == 0:
            out.append(SidedPoint(complex(oc.B), 0, theta))
            continue
        if 2 * j == M:
            out.append(SidedPoint(complex(oc.A), 0, theta))
            continue
        s = oc.radius_at(theta) * np.exp(1j * theta)
        side = 1 if theta < np.pi else -1
        out.append(SidedPoint(complex(oc.phi(s)), side, theta))
    return out


def _band(hat, rel=1e-13, floor=1e-14):
    """Contiguous symmetric frequency band holding all relevant modes.

    The absolute floor matters for small signals (a polar chart barely off
    pi - psi, say) whose FFT noise floor sits above any relative cut.
    """
    m = hat.size
    freq = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    mags = np.abs(hat)
    cut = max(rel * mags.max(), floor)
    kmax = 1
    for k in range(m // 2 - 1, 0, -1):
        if mags[k] > cut or mags[m - k] > cut:
            kmax = k
            break
    keep = np.abs(freq) <= kmax
    return freq[keep].astype(float), hat[keep]


def _count_crossings(p, q, polyline):
    """Count proper crossings of the segment pq with a polyline.

    Returns -1 when some edge configuration is too degenerate to decide;
    the caller perturbs the path and retries.
    """
    a = polyline[:-1]
    b = polyline[1:]
    dpq = q - p
    dab = b - a
    # orientation of each edge endpoint relative to the line pq and back
    c_a = dpq.real * (a - p).imag - dpq.imag * (a - p).real
    c_b = dpq.real * (b - p).imag - dpq.imag * (b - p).real
    c_p = dab.real * (p - a).imag - dab.imag * (p - a).real
    c_q = dab.real * (q - a).imag - dab.imag * (q - a).real
    # rounding-error bounds scale with the factors entering each cross product
    tol_a = 1e-12 * abs(dpq) * (np.abs(a - p) + abs(dpq))
    tol_b = 1e-12 * abs(dpq) * (np.abs(b - p) + abs(dpq))
    tol_p = 1e-12 * np.abs(dab) * (np.abs(p - a) + np.abs(dab))
    tol_q = 1e-12 * np.abs(dab) * (np.abs(q - a) + np.abs(dab))
    straddle_pq = np.sign(c_a) * np.sign(c_b) < 0
    straddle_ab = np.sign(c_p) * np.sign(c_q) < 0
    dim_pq = (np.abs(c_a) <= tol_a) | (np.abs(c_b) <= tol_b)
    dim_ab = (np.abs(c_p) <= tol_p) | (np.abs(c_q) <= tol_q)
    fuzzy = (dim_pq & (straddle_ab | dim_ab)) | (dim_ab & (straddle_pq | dim_pq))
    if np.any(fuzzy):
        return -1
    return int(np.count_nonzero(straddle_pq & straddle_ab))
