# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors _pykernels operation for operation; the
reduction tree, the per-point evaluation order, and the real-component
spelling of every complex product are identical, so results are
bit-identical with the NumPy fallback.  Native C complex multiplies are
avoided on purpose: they are free to round differently from NumPy's
vectorized ones, while real multiply/add/divide round the same way
everywhere."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pairwise_sum(a):
    """Sum a complex vector in a fixed pad-and-fold binary tree."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] work = \
        np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = work.shape[0]
    if n == 0:
        return 0j
    cdef Py_ssize_t p = 1
    while p < n:
        p *= 2
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf = \
        np.zeros(p, dtype=np.complex128)
    buf[:n] = work
    cdef double complex[::1] v = buf
    cdef Py_ssize_t h = p // 2, i
    while h >= 1:
        for i in range(h):
            v[i] = v[i] + v[h + i]
        h //= 2
    return complex(v[0])


def wdot(w, a, b):
    """Weighted inner product sum(w * a * conj(b)) with the fixed tree."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wv = \
        np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] av = \
        np.ascontiguousarray(a, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] bv = \
        np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = av.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] t = \
        np.empty(n, dtype=np.complex128)
    cdef double[::1] tv = t.view(np.float64)
    cdef double ar, ai, br, bi
    for i in range(n):
        ar = av[i].real
        ai = av[i].imag
        br = bv[i].real
        bi = bv[i].imag
        tv[2 * i] = (ar * br + ai * bi) * wv[i]
        tv[2 * i + 1] = (ai * br - ar * bi) * wv[i]
    return pairwise_sum(t)


def eval_power_series(coeffs, u):
    """Evaluate sum_k coeffs[k] * u**k by Horner's rule at each point.

    The output keeps the shape of ``u`` (scalars stay scalar-shaped).
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cr = \
        np.ascontiguousarray(c.real, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ci = \
        np.ascontiguousarray(c.imag, dtype=np.float64)
    uarr = np.asarray(u, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pts = \
        np.ascontiguousarray(uarr.reshape(-1), dtype=np.complex128)
    cdef Py_ssize_t m = cr.shape[0], npts = pts.shape[0], i, k
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = \
        np.empty(npts, dtype=np.complex128)
    cdef double[::1] ov = out.view(np.float64)
    cdef double accr, acci, tr, ti, ur, ui
    for i in range(npts):
        ur = pts[i].real
        ui = pts[i].imag
        accr = 0.0
        acci = 0.0
        for k in range(m - 1, -1, -1):
            tr = (accr * ur - acci * ui) + cr[k]
            ti = (accr * ui + acci * ur) + ci[k]
            accr = tr
            acci = ti
        ov[2 * i] = accr
        ov[2 * i + 1] = acci
    return out.reshape(uarr.shape)


def eval_orthopolys(hess, q0, xi, n):
    """Run the Hessenberg recurrence for orthonormal polynomials.

    The subdiagonal of ``hess`` holds the real positive normalization
    constants, so the closing division is componentwise real.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] H = \
        np.ascontiguousarray(hess, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pts = \
        np.ascontiguousarray(np.atleast_1d(xi), dtype=np.complex128)
    cdef Py_ssize_t npts = pts.shape[0], deg = n, i, j, k
    cdef cnp.ndarray[cnp.float64_t, ndim=2] outr = \
        np.empty((deg + 1, npts), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] outi = \
        np.empty((deg + 1, npts), dtype=np.float64)
    cdef double complex q0c = q0
    cdef double accr, acci, hr, hi, h, pr, pi
    for i in range(npts):
        outr[0, i] = q0c.real
        outi[0, i] = q0c.imag
    for k in range(deg):
        h = H[k + 1, k].real
        for i in range(npts):
            pr = pts[i].real
            pi = pts[i].imag
            accr = pr * outr[k, i] - pi * outi[k, i]
            acci = pr * outi[k, i] + pi * outr[k, i]
            for j in range(k + 1):
                hr = H[j, k].real
                hi = H[j, k].imag
                accr = accr - (hr * outr[j, i] - hi * outi[j, i])
                acci = acci - (hr * outi[j, i] + hi * outr[j, i])
            outr[k + 1, i] = accr / h
            outi[k + 1, i] = acci / h
    out = np.empty((deg + 1, npts), dtype=np.complex128)
    out.real = outr
    out.imag = outi
    return out
