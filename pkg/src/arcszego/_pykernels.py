"""NumPy implementations of the summation and evaluation kernels.

The compiled module ``_ckernels`` mirrors these routines operation for
operation.  Every reduction runs in the same fixed binary tree (pad to a
power of two, then fold halves), and complex products are spelled out in
real components: a native C complex multiply and NumPy's vectorized one
round differently (fused multiply-adds on one side or the other), while
elementwise real multiply, add and divide are single correctly rounded
operations everywhere.  Writing the real-component formula in the same
order in both backends is what makes the results bit-identical.
"""

import numpy as np


def pairwise_sum(a):
    """Sum a complex vector in a fixed pad-and-fold binary tree.

    Parameters
    ----------
    a : array_like
        One-dimensional complex data.

    Returns
    -------
    complex
    """
    work = np.asarray(a, dtype=np.complex128)
    n = work.size
    if n == 0:
        return 0j
    p = 1
    while p < n:
        p *= 2
    buf = np.zeros(p, dtype=np.complex128)
    buf[:n] = work
    h = p // 2
    while h >= 1:
        buf[:h] += buf[h:2 * h]
        h //= 2
    return complex(buf[0])


def wdot(w, a, b):
    """Weighted inner product sum(w * a * conj(b)) with the fixed tree.

    ``w`` is real, ``a`` and ``b`` complex, all of one length.
    """
    av = np.asarray(a, dtype=np.complex128)
    bv = np.asarray(b, dtype=np.complex128)
    wv = np.asarray(w, dtype=np.float64)
    ar, ai = av.real, av.imag
    br, bi = bv.real, bv.imag
    t = np.empty(av.size, dtype=np.complex128)
    t.real = (ar * br + ai * bi) * wv
    t.imag = (ai * br - ar * bi) * wv
    return pairwise_sum(t)


def eval_power_series(coeffs, u):
    """Evaluate sum_k coeffs[k] * u**k by Horner's rule at each point.

    Parameters
    ----------
    coeffs : array_like
        Complex series coefficients, constant term first.
    u : array_like
        Complex evaluation points.

    Returns
    -------
    ndarray
        Series values, one per point.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    pts = np.asarray(u, dtype=np.complex128)
    ur, ui = pts.real, pts.imag
    cr, ci = c.real, c.imag
    accr = np.zeros(pts.shape)
    acci = np.zeros(pts.shape)
    for k in range(c.size - 1, -1, -1):
        tr = (accr * ur - acci * ui) + cr[k]
        ti = (accr * ui + acci * ur) + ci[k]
        accr, acci = tr, ti
    out = np.empty(pts.shape, dtype=np.complex128)
    out.real = accr
    out.imag = acci
    return out


def eval_orthopolys(hess, q0, xi, n):
    """Run the Hessenberg recurrence for orthonormal polynomials.

    p_0 = q0 and p_{k+1}(x) = (x p_k(x) - sum_{j<=k} H[j,k] p_j(x)) / H[k+1,k]
    in the recentred variable ``xi``.

    Parameters
    ----------
    hess : ndarray
        Upper Hessenberg recurrence data, shape at least (n+1, n).
    q0 : complex
        Value of the degree-zero orthonormal polynomial.
    xi : array_like
        Recentred evaluation points.
    n : int
        Highest degree to evaluate.

    Returns
    -------
    ndarray
        Shape (n+1, len(xi)); row k holds p_k at the points.
    """
    pts = np.asarray(xi, dtype=np.complex128)
    H = np.asarray(hess, dtype=np.complex128)
    q0c = complex(q0)
    m = pts.size
    ptsr, ptsi = pts.real, pts.imag
    outr = np.empty((n + 1, m))
    outi = np.empty((n + 1, m))
    outr[0] = q0c.real
    outi[0] = q0c.imag
    for k in range(n):
        accr = ptsr * outr[k] - ptsi * outi[k]
        acci = ptsr * outi[k] + ptsi * outr[k]
        for j in range(k + 1):
            hr = H[j, k].real
            hi = H[j, k].imag
            accr = accr - (hr * outr[j] - hi * outi[j])
            acci = acci - (hr * outi[j] + hi * outr[j])
        # the subdiagonal holds the real positive normalization constants
        h = H[k + 1, k].real
        outr[k + 1] = accr / h
        outi[k + 1] = acci / h
    out = np.empty((n + 1, m), dtype=np.complex128)
    out.real = outr
    out.imag = outi
    return out
