"""Orthonormal polynomials and Christoffel functions on an arc.

Polynomials are built by Arnoldi iteration directly on the quadrature
nodes of a transplanted inner product: multiply by the recentred node
variable, orthogonalize twice against everything built so far (classical
Gram-Schmidt run twice keeps the basis orthonormal to machine precision
without the sequential dependence of the modified variant), normalize,
repeat.  The recurrence coefficients land in an upper Hessenberg matrix
that later evaluates the same polynomials anywhere in the plane.

Recentring matters: the raw monomials z^k on an arc far from the origin
are catastrophically ill conditioned.  Arnoldi works in

    xi = (z - center) / scale,   center = (A + B)/2,  scale = |B - A|/4

which puts the arc's chord on [-2, 2] where the recurrence is tame.
All inner products run through the fixed-tree kernels, so a system built
twice from the same quadrature is bit identical.
"""

import numpy as np

from . import _kernels

_BREAKDOWN = "measure support resolves fewer than k+1 points"
_HTINY = 1e-250


class OrthonormalSystem:
    """Orthonormal polynomials p_0 ... p_n for a discrete inner product.

    Attributes
    ----------
    ip : DiscreteInnerProduct
        The quadrature the system was orthonormalized against.
    mode : str
        Which weight family of ``ip`` was used ("measure" or "hardy").
    degree : int
        Highest polynomial degree available.
    hess : ndarray
        Upper Hessenberg recurrence matrix, shape (degree+1, degree).
    node_values : ndarray
        p_k at the quadrature nodes, shape (degree+1, len(nodes)).
    """

    def __init__(self, ip, mode, center, scale, q0, hess, node_values):
        self.ip = ip
        self.mode = mode
        self.center = center
        self.scale = scale
        self.q0 = q0
        self.hess = hess
        self.node_values = node_values
        # h_k = |leading coefficient of p_k in z|^{-1}: the norm of the
        # minimal monic degree-k polynomial
        sub = np.concatenate([[1.0 / q0], np.real(np.diagonal(hess, -1))])
        self._monic = np.cumprod(sub) * scale ** np.arange(hess.shape[1] + 1)

    @property
    def degree(self):
        return self.hess.shape[1]

    def evaluate(self, z, n=None):
        """p_0 ... p_n at the points ``z``; shape (n+1, len(z))."""
        if n is None:
            n = self.degree
        if n > self.degree:
            raise ValueError("system holds degrees up to %d" % self.degree)
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        xi = (pts - self.center) / self.scale
        return _kernels.eval_orthopolys(self.hess, self.q0, xi, n)

    def monic_norm(self, k):
        """Norm of the minimal monic polynomial of degree k."""
        return float(self._monic[k])


def arnoldi_system(w, pts, degree, center=0.0, scale=1.0, ip=None,
                   mode="measure"):
    """Arnoldi-orthonormalize 1, z, z^2, ... against weighted nodes.

    The generic entry point: ``sum_j w_j conj(a_j) b_j`` is the inner
    product, ``pts`` are the nodes, and ``center``/``scale`` recentre the
    recurrence.  ``orthonormalize`` wraps this for a transplanted arc
    quadrature; the circle oracle calls it directly with uniform nodes.

    Raises
    ------
    ValueError
        If the normalization constant underflows, which means the
        weighted nodes cannot tell degree k+1 polynomials apart.
    """
    xi = (np.asarray(pts, dtype=complex) - center) / scale
    m = xi.size
    q = np.empty((degree + 1, m), dtype=complex)
    hess = np.zeros((degree + 1, degree), dtype=complex)

    h0 = np.sqrt(_kernels.wdot(w, np.ones(m), np.ones(m)).real)
    if not h0 > _HTINY:
        raise ValueError(_BREAKDOWN)
    q[0] = 1.0 / h0
    for k in range(degree):
        work = xi * q[k]
        norm0 = np.sqrt(_kernels.wdot(w, work, work).real)
        for _ in range(2):
            for j in range(k + 1):
                c = _kernels.wdot(w, work, q[j])
                work = work - c * q[j]
                hess[j, k] += c
        h = np.sqrt(_kernels.wdot(w, work, work).real)
        # a residual at rounding level relative to |xi q_k| means the
        # weighted nodes lie on an algebraic set of lower degree
        if not (h > _HTINY and h > 1e-14 * norm0):
            raise ValueError(_BREAKDOWN)
        hess[k + 1, k] = h
        q[k + 1] = work / h
    return OrthonormalSystem(ip, mode, center, scale, 1.0 / h0, hess, q)


def orthonormalize(ip, degree, mode="measure"):
    """Arnoldi-orthonormalize against a transplanted arc quadrature.

    Parameters
    ----------
    ip : DiscreteInnerProduct
        Quadrature from ``transplant_quadrature``.
    degree : int
        Highest polynomial degree to build.
    mode : str
        Weight family: "measure" for the plain integral against the
        measure, "hardy" for the two-sided contour norm.
    """
    arc = ip.frame.arc
    center = (arc.A + arc.B) / 2.0
    scale = abs(arc.B - arc.A) / 4.0
    return arnoldi_system(ip.weights(mode), ip.nodes(), degree,
                          center=center, scale=scale, ip=ip, mode=mode)


def christoffel_value(system, z0=None, n=None):
    """lambda_n(mu, z0): the minimal squared norm among polynomials of
    degree at most n with value 1 at z0.

    ``z0=None`` asks for the base point at infinity, where the right
    normalization is a monic leading coefficient and the minimum is the
    squared monic norm.
    """
    if n is None:
        n = system.degree
    if z0 is None:
        return system.monic_norm(n) ** 2
    vals = system.evaluate(np.array([z0]), n)[:, 0]
    s = _kernels.pairwise_sum(np.abs(vals) ** 2).real
    return 1.0 / s


def extremal_values(system, z, z0=None, n=None):
    """Evaluate the polynomial that attains lambda_n(mu, z0).

    For finite z0 this is lambda_n * sum_k conj(p_k(z0)) p_k(z), which
    takes the value 1 at z0.  At infinity it is the minimal monic
    polynomial h_n p_n.
    """
    if n is None:
        n = system.degree
    pts = np.atleast_1d(np.asarray(z, dtype=complex))
    rows = system.evaluate(pts, n)
    if z0 is None:
        return system.monic_norm(n) * rows[n]
    at0 = system.evaluate(np.array([z0]), n)[:, 0]
    lam = 1.0 / _kernels.pairwise_sum(np.abs(at0) ** 2).real
    return lam * (np.conj(at0) @ rows)


def extremal_node_values(system, n, z0=None):
    """Extremal polynomial at the quadrature nodes themselves.

    Same polynomial as ``extremal_values`` but read off the rows stored
    during orthonormalization, so sweeping over degrees costs one small
    matrix product per degree instead of a fresh recurrence over all
    nodes.
    """
    rows = system.node_values[:n + 1]
    if z0 is None:
        return system.monic_norm(n) * rows[n]
    at0 = system.evaluate(np.array([z0]), n)[:, 0]
    lam = 1.0 / _kernels.pairwise_sum(np.abs(at0) ** 2).real
    return lam * (np.conj(at0) @ rows)


def widom_square(frame, system, n):
    """cap^{-2n} lambda_n at the frame's base point.

    ``frame.cap`` holds the logarithmic capacity for the base point at
    infinity and 1/Phi0 for a finite base point, so the same formula
    covers both regimes.
    """
    return frame.cap ** (-2 * n) * christoffel_value(system, frame.z0, n)
