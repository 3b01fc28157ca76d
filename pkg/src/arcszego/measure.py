"""Measures on the two-sided arc and their transplant quadratures.

A measure is described relative to the equilibrium measure omega_inf:

    dmu = f domega_inf + atoms,   f(t) = scale * smooth(t) * |z-A|^a |z-B|^b

with a smooth factor, optional endpoint power factors, and point masses
given by arc parameters. Working in a frame based at z0, the
Radon-Nikodym derivative against omega_{z0} picks up the ratio of the
total harmonic densities; the quadrature below folds that in.

The transplant rule samples the B-circle at the half-offset angles
theta_j = 2 pi (j + 1/2) / M, where harmonic measure is uniform. Plain
weights f_j / M integrate point functions against mu. The "hardy" weight
mode multiplies by rho / rho_side, turning the same nodes into the
two-sided contour norm in which the reproducing kernel lives: both side
values of a boundary function are paired against the same f, so the
contour norm of the constant 1 is twice the ac mass in every frame.
"""

import re

import numpy as np

from . import _kernels
from .conformal import build_frame, harmonic_density

_NAME_RE = re.compile(r"^([a-z_]+)\s*(?:\(\s*([^)]*?)\s*\))?$")


class _SampledDensity:
    """Barycentric interpolant of density samples on the Chebyshev grid."""

    def __init__(self, rows):
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 33:
            raise ValueError("density samples need at least 33 rows of (t, value)")
        arr = arr[np.argsort(arr[:, 0])]
        t = arr[:, 0]
        n = t.size - 1
        ref = (1.0 - np.cos(np.pi * np.arange(n + 1) / n)) / 2.0
        if np.max(np.abs(t - ref)) > 1e-9:
            raise ValueError("density samples must be Chebyshev-spaced")
        # isolated zeros are admitted; the log integrals clip them
        if np.min(arr[:, 1]) < 0.0:
            raise ValueError("density samples must be nonnegative")
        w = np.ones(n + 1)
        w[1::2] = -1.0
        w[0] *= 0.5
        w[-1] *= 0.5
        self._t = ref
        self._w = w
        self._v = arr[:, 1]

    def __call__(self, t):
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        num = np.zeros(tt.shape)
        den = np.zeros(tt.shape)
        exact = np.full(tt.shape, -1, dtype=int)
        for j, tj in enumerate(self._t):
            d = tt - tj
            hit = np.abs(d) < 1e-15
            exact[hit] = j
            d[hit] = 1.0
            r = self._w[j] / d
            num += r * self._v[j]
            den += r
        out = num / den
        out[exact >= 0] = self._v[exact[exact >= 0]]
        return out if np.ndim(t) else float(out[0])


class MeasureSpec:
    """A measure on the arc: smooth density, endpoint powers, atoms."""

    def __init__(self, kind, params=(), samples=None, atoms=(), scale=1.0):
        self.kind = kind
        self.params = tuple(float(p) for p in params)
        self.scale = float(scale)
        if self.scale <= 0.0:
            raise ValueError("density scale must be positive")
        self._sampled = _SampledDensity(samples) if samples is not None else None
        atoms = [(float(t), float(m)) for t, m in atoms]
        for t, m in atoms:
            if not 0.0 <= t <= 1.0:
                raise ValueError("atom parameter outside [0, 1]")
            if m <= 0.0:
                raise ValueError("atom mass must be positive")
        self.atoms = tuple(atoms)
        if kind == "jacobi":
            a, b = self.params
            if a <= -0.5 or b <= -0.5:
                raise ValueError("jacobi exponents must exceed -1/2")

    @classmethod
    def parse(cls, text, atoms=(), scale=1.0):
        m = _NAME_RE.match(text.strip())
        if not m:
            raise ValueError("unrecognized density %r" % (text,))
        name, args = m.group(1), m.group(2)
        params = tuple(float(a) for a in args.split(",")) if args else ()
        want = {"one": 0, "quad_bump": 0, "exp_cos": 1, "jacobi": 2}
        if name not in want:
            raise ValueError("unrecognized density %r" % (text,))
        if len(params) != want[name]:
            raise ValueError("density %r takes %d parameter(s)" % (name, want[name]))
        return cls(name, params, atoms=atoms, scale=scale)

    @classmethod
    def from_config(cls, obj):
        if isinstance(obj, str):
            return cls.parse(obj)
        obj = dict(obj)
        atoms = obj.get("atoms", ())
        scale = obj.get("scale", 1.0)
        density = obj.get("density", "one")
        if isinstance(density, dict):
            return cls("samples", samples=density["samples"], atoms=atoms,
                       scale=scale)
        return cls.parse(density, atoms=atoms, scale=scale)

    @property
    def exponents(self):
        if self.kind == "jacobi":
            return self.params
        return (0.0, 0.0)

    def smooth(self, t):
        """The smooth density factor; endpoint powers are kept symbolic."""
        t = np.asarray(t, dtype=float)
        if self.kind in ("one", "jacobi"):
            base = np.ones(t.shape)
        elif self.kind == "exp_cos":
            base = np.exp(self.params[0] * np.cos(np.pi * t))
        elif self.kind == "quad_bump":
            x = 2.0 * t - 1.0
            base = 1.0 + 0.5 * x * x
        elif self.kind == "samples":
            # the interpolant may dip below zero between zero samples
            base = np.maximum(np.atleast_1d(self._sampled(t)), 0.0)
            base = base.reshape(t.shape) if t.ndim else base
        else:
            raise ValueError("unrecognized density %r" % (self.kind,))
        return self.scale * base

    def log_smooth(self, t):
        return np.log(np.maximum(self.smooth(t), 1e-300))

    def density_on(self, arc, t):
        """Numeric density against omega_inf, endpoint factors included."""
        vals = self.smooth(t)
        a, b = self.exponents
        if a or b:
            z = arc.gamma(t)
            vals = vals * np.abs(z - arc.A) ** a * np.abs(z - arc.B) ** b
        return vals

    def rescaled(self, factor):
        return MeasureSpec(self.kind, self.params,
                           samples=None if self._sampled is None else
                           np.column_stack([self._sampled._t, self._sampled._v]),
                           atoms=self.atoms, scale=self.scale * factor)

    def rescaled_total(self, factor):
        """Scale the whole measure, atoms included."""
        atoms = tuple((t, m * factor) for t, m in self.atoms)
        return MeasureSpec(self.kind, self.params,
                           samples=None if self._sampled is None else
                           np.column_stack([self._sampled._t, self._sampled._v]),
                           atoms=atoms, scale=self.scale * factor)

    def without_atoms(self):
        return MeasureSpec(self.kind, self.params,
                           samples=None if self._sampled is None else
                           np.column_stack([self._sampled._t, self._sampled._v]),
                           atoms=(), scale=self.scale)


class DiscreteInnerProduct:
    """Quadrature nodes and weights realizing L^2(mu) on the arc.

    ``weights("measure")`` integrates point functions against mu.
    ``weights("hardy")`` integrates the two-sided boundary pairing in
    which the reproducing kernel of the ac part lives; atoms keep their
    plain masses in both modes.
    """

    def __init__(self, frame, spec, t, side, theta_B, z, fvals, hardy_ratio,
                 atom_z, atom_w):
        self.frame = frame
        self.spec = spec
        self.t = t
        self.side = side
        self.theta_B = theta_B
        self.z = z
        self.f = fvals
        self.hardy_ratio = hardy_ratio
        self.atom_z = atom_z
        self.atom_w = atom_w
        self.M = t.size

    def nodes(self, include_atoms=True):
        if include_atoms and self.atom_z.size:
            return np.concatenate([self.z, self.atom_z])
        return self.z

    def weights(self, mode="measure", include_atoms=True):
        if mode == "measure":
            w = self.f / self.M
        elif mode == "hardy":
            w = self.f * self.hardy_ratio / self.M
        else:
            raise ValueError("unrecognized weight mode %r" % (mode,))
        if include_atoms and self.atom_z.size:
            return np.concatenate([w, self.atom_w])
        return w

    def dot(self, avals, bvals, mode="measure", include_atoms=True):
        """<a, b> = sum w_j a_j conj(b_j), deterministically ordered."""
        w = self.weights(mode, include_atoms)
        a = np.asarray(avals, complex)
        b = np.asarray(bvals, complex)
        for vals in (a, b):
            bad = ~np.isfinite(vals)
            if bad.any():
                raise ValueError("non-finite value at node %d"
                                 % int(np.flatnonzero(bad)[0]))
        return _kernels.wdot(w, a, b)

    def mass(self, include_atoms=True):
        w = self.weights("measure", include_atoms)
        return float(_kernels.pairwise_sum(w.astype(complex)).real)


def _node_frame_data(frame, M):
    theta_B = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    tw = frame.theta_w_from_theta_B(theta_B)
    z, t, side = frame.arc_from_theta_w(tw)
    return theta_B, tw, z, t, side


def _build_ip(frame, spec, M, hm, hm_inf):
    theta_B, tw, z, t, side = _node_frame_data(frame, M)
    f = spec.density_on(frame.arc, t)
    if frame.z0 is not None:
        f = f * hm_inf.density(t) / hm.density(t)
    ratio = hm.density(t) / hm.side_density(t, side)
    atom_z = np.array([frame.arc.gamma(a) for a, _ in spec.atoms], dtype=complex)
    atom_w = np.array([m for _, m in spec.atoms], dtype=float)
    return DiscreteInnerProduct(frame, spec, t, side, theta_B, z, f, ratio,
                                atom_z, atom_w)


def _probe_gram(ip, deg=8):
    c = (ip.frame.arc.A + ip.frame.arc.B) / 2.0
    s = abs(ip.frame.arc.B - ip.frame.arc.A) / 4.0
    xi = (ip.nodes() - c) / s
    w = ip.weights("measure")
    V = [np.ones_like(xi)]
    for _ in range(deg):
        V.append(V[-1] * xi)
    G = np.empty((deg + 1, deg + 1), dtype=complex)
    for i in range(deg + 1):
        for j in range(i + 1):
            G[i, j] = _kernels.wdot(w, V[i], V[j])
            G[j, i] = np.conj(G[i, j])
    return G


def transplant_quadrature(frame, spec, M=None, frame_inf=None):
    """Build the discrete inner product for mu in the given frame.

    With M unset the node count doubles from 2^12 until the probe Gram
    matrix stops moving (relative Frobenius 1e-10), capped at 2^15.
    """
    hm = harmonic_density(frame)
    if frame.z0 is None:
        hm_inf = hm
    else:
        if frame_inf is None:
            frame_inf = build_frame(frame.arc, None)
        hm_inf = harmonic_density(frame_inf)
    if M is not None:
        return _build_ip(frame, spec, int(M), hm, hm_inf)
    M = 4096
    ip = _build_ip(frame, spec, M, hm, hm_inf)
    G = _probe_gram(ip)
    while M < 32768:
        M *= 2
        ip_next = _build_ip(frame, spec, M, hm, hm_inf)
        G_next = _probe_gram(ip_next)
        drift = np.linalg.norm(G_next - G) / (1.0 + np.linalg.norm(G_next))
        ip, G = ip_next, G_next
        if drift <= 1e-10:
            break
    return ip


# log integrals against harmonic measure ------------------------------------

def endpoint_log_moment(frame, which):
    """int log|z - E| domega_{z0} for an endpoint E, in closed form."""
    E = frame.arc.A if which == "A" else frame.arc.B
    if frame.z0 is None:
        return float(np.log(frame.cap))
    return float(np.log(abs(frame.z0 - E)) - np.log(frame.Phi0))


def szego_log_mean(frame, spec, M=4096, frame_inf=None):
    """int log(dmu_ac/domega_{z0}) domega_{z0}, endpoint powers split off."""
    hm = harmonic_density(frame)
    _, tw, z, t, side = _node_frame_data(frame, M)
    vals = spec.log_smooth(t)
    if frame.z0 is not None:
        if frame_inf is None:
            frame_inf = build_frame(frame.arc, None)
        hm_inf = harmonic_density(frame_inf)
        vals = vals + np.log(hm_inf.density(t) / hm.density(t))
    a, b = spec.exponents
    out = float(np.mean(vals))
    if a:
        out += a * endpoint_log_moment(frame, "A")
    if b:
        out += b * endpoint_log_moment(frame, "B")
    return out


def widom_log_mean(frame, spec, M=4096, frame_inf=None):
    """int log(f_{z0} rho_{z0}) domega_{z0}, endpoint roots in closed form.

    The integrand is the arclength density of the ac part of mu, so the
    frame's own harmonic density cancels out of it; the base point only
    enters through the integration measure and the endpoint moments.
    """
    _, tw, z, t, side = _node_frame_data(frame, M)
    if frame.z0 is None:
        hm_inf = harmonic_density(frame)
    else:
        if frame_inf is None:
            frame_inf = build_frame(frame.arc, None)
        hm_inf = harmonic_density(frame_inf)
    arc = frame.arc
    sqrtw = np.sqrt(np.abs(z - arc.A) * np.abs(z - arc.B))
    vals = spec.log_smooth(t) + np.log(hm_inf.density(t) * sqrtw)
    a, b = spec.exponents
    out = float(np.mean(vals))
    out += (a - 0.5) * endpoint_log_moment(frame, "A")
    out += (b - 0.5) * endpoint_log_moment(frame, "B")
    return out


def normalized_on(spec, frame_inf, M=8192):
    """Rescale so the ac part has unit mass against omega_inf."""
    ip = transplant_quadrature(frame_inf, spec.without_atoms(), M=M)
    mass = ip.mass()
    out = spec.rescaled(1.0 / mass)
    return out
