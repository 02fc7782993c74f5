# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for warp evaluation and cumulative volume integrals."""

import numpy as np

cimport numpy as cnp
from libc.math cimport tanh, pow

cnp.import_array()

_GL_NODES_PY, _GL_WEIGHTS_PY = np.polynomial.legendre.leggauss(16)
cdef double[16] _GL_NODES
cdef double[16] _GL_WEIGHTS
for _i in range(16):
    _GL_NODES[_i] = _GL_NODES_PY[_i]
    _GL_WEIGHTS[_i] = _GL_WEIGHTS_PY[_i]


def smoothed_cone_eval(r, double c, double delta):
    """Evaluate phi, phi', phi'' of the smoothed cone warp at radii ``r``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(
        np.ravel(np.asarray(r, dtype=np.float64)))
    cdef Py_ssize_t m = flat.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phi = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dphi = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ddphi = np.empty(m)
    cdef Py_ssize_t i
    cdef double t, sech2, ri
    for i in range(m):
        ri = flat[i]
        t = tanh(ri / delta)
        sech2 = 1.0 - t * t
        phi[i] = c * ri + (1.0 - c) * delta * t
        dphi[i] = c + (1.0 - c) * sech2
        ddphi[i] = -2.0 * (1.0 - c) / delta * sech2 * t
    shape = np.shape(r)
    return phi.reshape(shape), dphi.reshape(shape), ddphi.reshape(shape)


def ball_volume_integral_smoothed_cone(r, double c, double delta, int n,
                                       int panels=64):
    """Compute I(R) = integral_0^R phi(s)^(n-1) ds for each R in ``r``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(
        np.ravel(np.asarray(r, dtype=np.float64)))
    cdef Py_ssize_t m = flat.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m)
    cdef Py_ssize_t i, j, k
    cdef double R, width, left, s, phi, t, acc, panel_acc
    for i in range(m):
        R = flat[i]
        width = R / panels
        acc = 0.0
        for j in range(panels):
            left = j * width
            panel_acc = 0.0
            for k in range(16):
                s = left + 0.5 * width * (_GL_NODES[k] + 1.0)
                t = tanh(s / delta)
                phi = c * s + (1.0 - c) * delta * t
                panel_acc += _GL_WEIGHTS[k] * pow(phi, n - 1)
            acc += 0.5 * width * panel_acc
        out[i] = acc
    return out.reshape(np.shape(r))
