"""Pure-numpy implementations of the hot kernels.

Mirrors the Cython extension ``_core`` exactly; selected at import time by
``radineq._kernels`` when the compiled module is unavailable.
"""

from __future__ import annotations

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def smoothed_cone_eval(r, c, delta):
    """Evaluate phi, phi', phi'' of the smoothed cone warp at radii ``r``.

    phi(r) = c*r + (1-c)*delta*tanh(r/delta).
    """
    r = np.asarray(r, dtype=float)
    x = r / delta
    t = np.tanh(x)
    sech2 = 1.0 - t * t
    phi = c * r + (1.0 - c) * delta * t
    dphi = c + (1.0 - c) * sech2
    ddphi = -2.0 * (1.0 - c) / delta * sech2 * t
    return phi, dphi, ddphi


def ball_volume_integral_smoothed_cone(r, c, delta, n, panels=64):
    """Compute I(R) = integral_0^R phi(s)^(n-1) ds for each R in ``r``.

    Composite 16-point Gauss-Legendre on ``panels`` uniform panels per
    element; the integrand is analytic so this is near machine precision
    for panel widths comparable to ``delta``.
    """
    r = np.asarray(r, dtype=float)
    flat = np.ravel(r)
    edges = np.linspace(0.0, 1.0, panels + 1)
    left = edges[:-1]
    width = edges[1] - edges[0]
    # nodes shape: (nR, panels, 16)
    s01 = left[:, None] + 0.5 * width * (_GL_NODES[None, :] + 1.0)
    s = flat[:, None, None] * s01[None, :, :]
    phi, _, _ = smoothed_cone_eval(s, c, delta)
    vals = phi ** (n - 1)
    integral = 0.5 * width * flat * np.einsum("ijk,k->i", vals, _GL_WEIGHTS)
    return integral.reshape(np.shape(r))
