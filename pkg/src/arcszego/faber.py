"""Generalized Faber polynomials by contour integration.

T(w) = (1/2pi i) oint F(z) Phi(z)^n / (z - w) dz over the level curve
|Phi| = R, computed by the trapezoid rule in the circle parametrization
z = Phi^{-1}(R e^{i theta}).  The contour samples are built once per
(weight, n, R) and each evaluation is a single dot product, so sweeps
over many points w stay cheap.

The integrand carries the factor R^n, and the integral cancels it down
to O(1) values on and near the arc.  Every digit of that cancellation is
paid for in rounding, so the default radius hugs the arc as the degree
grows (R - 1 of order 1/n keeps R^n bounded); by Cauchy's theorem the
value itself does not depend on R as long as the weight is analytic
across the contour.
"""

import numpy as np

from . import _kernels

_NODES = 4096
_TOO_CLOSE = "evaluation point too close to contour"


def _default_radius(n):
    return min(1.5, 1.0 + 6.0 / max(n, 1))


def _contour(frame, R, nodes):
    """Sample z, dz/dzeta on the level curve Phi(z) = R e^{i theta}."""
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    zeta = R * np.exp(1j * theta)
    q = zeta / (frame.lam * frame.rot)
    s = frame.ext.F(q)
    z = frame.oc.phi(s)
    dzdzeta = frame.oc.dphi(s) * frame.ext.dF(q) / (frame.lam * frame.rot)
    return zeta, z, dzdzeta


class FaberPolynomial:
    """Degree-n polynomial with the weight's exterior asymptotics.

    Evaluation is restricted to points strictly inside the contour; the
    cached samples make each call a dot product over the nodes.
    """

    def __init__(self, frame, weight, n, R=None, nodes=_NODES):
        self.frame = frame
        self.weight = weight
        self.n = int(n)
        if R is None:
            R = _default_radius(self.n)
        if not R > 1.0:
            raise ValueError("contour radius must exceed 1")
        for _ in range(8):
            zeta, z, dzdzeta = _contour(frame, R, nodes)
            fv = np.asarray(weight(z), dtype=complex)
            if np.all(np.isfinite(fv)):
                scale = np.median(np.abs(fv))
                if np.max(np.abs(fv)) <= 1e8 * (1.0 + scale):
                    break
            # weight blows up: its analyticity radius is below R
            R = 1.0 + 0.618 * (R - 1.0)
        else:
            raise ValueError("weight samples blow up on every contour radius")
        self.R = R
        self._z = z
        self._dz_dtheta = 1j * zeta * dzdzeta
        self._num = fv * zeta ** (self.n + 1) * dzdzeta / nodes
        # leading coefficient F(inf) (Phi'(inf))^n; the weight factor is 1
        # for weights normalized at infinity, which is the classical case
        far = frame.oc.c + 1e8 * (frame.arc.B - frame.arc.A)
        w_inf = np.asarray(weight(np.array([far])), dtype=complex).ravel()[0]
        self.leading = complex(w_inf) * (frame.lam * frame.deriv_inf) ** self.n

    def _guard(self, w):
        # distance to the contour polyline, tangent-refined at the
        # nearest node; only points already close by node distance get
        # the refinement
        d = np.abs(self._z[None, :] - w[:, None])
        j = np.argmin(d, axis=1)
        close = d[np.arange(w.size), j] < 1e-2
        if not np.any(close):
            return
        step = 2.0 * np.pi / self._z.size
        zj = self._z[j[close]]
        tj = self._dz_dtheta[j[close]]
        delta = np.real((w[close] - zj) * np.conj(tj)) / np.abs(tj) ** 2
        delta = np.clip(delta, -step, step)
        dist = np.abs(w[close] - (zj + tj * delta))
        if np.any(dist < 1e-6):
            raise ValueError(_TOO_CLOSE)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        flat = np.atleast_1d(w).ravel()
        self._guard(flat)
        out = np.empty(flat.size, dtype=complex)
        for i in range(flat.size):
            out[i] = _kernels.pairwise_sum(self._num / (self._z - flat[i]))
        out = out.reshape(np.shape(w))
        return out if w.ndim else complex(out)

    def boundary_reference(self, t, kernel_data):
        """Two-sided target F+ Phi+^n + F- Phi-^n at arc parameters t."""
        return kernel_data.hn(self.n, t)


def faber_transform(frame, weight, n, R, W):
    """Values of the generalized Faber polynomial at the points W."""
    return FaberPolynomial(frame, weight, n, R=R)(W)
