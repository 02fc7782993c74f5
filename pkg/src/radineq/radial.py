"""Radial profiles and quadrature against the manifold volume density.

Integrals over a model M reduce to one-dimensional weighted integrals:
integral_M f(r) dV = n * omega_n * integral_0^rmax f(r) phi(r)^(n-1) dr.
Geometric panels resolve both origin-singular weights (r^-s, s < n) and
slowly varying tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError, IntegrabilityError
from .manifold import ModelManifold

__all__ = [
    "RadialGrid",
    "RadialProfile",
    "ProfileFamily",
    "materialize",
    "integrate",
    "save_profile",
    "load_profile",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(eq=False)
class RadialGrid:
    """Strictly increasing positive nodes, geometrically spaced."""

    nodes: np.ndarray

    def __post_init__(self) -> None:
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes[0] <= 0.0 or np.any(np.diff(self.nodes) <= 0):
            raise DomainError("grid nodes must be positive and strictly increasing")

    @classmethod
    def geometric(cls, r_max: float, n_nodes: int = 2048,
                  r_min_factor: float = 1e-6) -> "RadialGrid":
        return cls(np.geomspace(r_min_factor * r_max, r_max, n_nodes))

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])


def _smoothstep(x):
    """C^2 smoothstep: 0 for x<=0, 1 for x>=1, 6x^5-15x^4+10x^3 between."""
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x))


def _smoothstep_d(x):
    inside = (x > 0.0) & (x < 1.0)
    x = np.clip(x, 0.0, 1.0)
    return np.where(inside, 30.0 * x * x * (x - 1.0) ** 2, 0.0)


@dataclass(eq=False)
class RadialProfile:
    """A compactly supported piecewise-C^1 radial function.

    Parametric families carry exact callables; tabulated profiles fall back
    to monotone cubic interpolation of the samples with finite-difference
    derivatives.
    """

    grid: RadialGrid
    values: np.ndarray
    derivs: np.ndarray
    support_radius: float
    value_fn: Callable | None = None
    deriv_fn: Callable | None = None
    family: str = ""
    breakpoints: tuple = ()
    _interp: PchipInterpolator | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        self.derivs = np.asarray(self.derivs, dtype=float)
        if not np.all(np.isfinite(self.values)):
            raise DomainError("profile values must be finite")

    def _interpolator(self) -> PchipInterpolator:
        if self._interp is None:
            x = np.concatenate(([0.0], self.grid.nodes))
            y = np.concatenate(([self.values[0]], self.values))
            self._interp = PchipInterpolator(x, y, extrapolate=False)
        return self._interp

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.value_fn is not None:
            return np.where(r < self.support_radius, self.value_fn(r), 0.0)
        out = self._interpolator()(np.clip(r, 0.0, self.grid.r_max))
        out = np.nan_to_num(out, nan=0.0)
        return np.where(r < self.support_radius, out, 0.0)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        if self.deriv_fn is not None:
            return np.where(r < self.support_radius, self.deriv_fn(r), 0.0)
        out = self._interpolator().derivative()(np.clip(r, 0.0, self.grid.r_max))
        out = np.nan_to_num(out, nan=0.0)
        return np.where(r < self.support_radius, out, 0.0)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_nonincreasing(self, tol: float = 1e-12) -> bool:
        v = np.abs(self.values)
        return bool(np.all(np.diff(v) <= tol * max(1.0, v.max())))


@dataclass(eq=False)
class ProfileFamily:
    """Named parametric family generating corpus members.

    Supported names: gaussian, bump, two_bump, talenti, hardy_near_extremal,
    annulus.
    """

    name: str
    params: dict

    def label(self) -> str:
        inner = ",".join(f"{k}={self.params[k]:g}" for k in sorted(self.params))
        return f"{self.name}({inner})"


def _gaussian(alpha: float):
    if alpha <= 0:
        raise ConfigError("gaussian alpha must be positive")
    R = math.sqrt(80.0 / alpha)
    R0 = 0.75 * R

    def w(r):
        return _smoothstep((R - r) / (R - R0))

    def wd(r):
        return -_smoothstep_d((R - r) / (R - R0)) / (R - R0)

    def value(r):
        return np.exp(-alpha * r * r) * w(r)

    def deriv(r):
        e = np.exp(-alpha * r * r)
        return -2.0 * alpha * r * e * w(r) + e * wd(r)

    return value, deriv, R, (R0, R)


def _bump(R: float, k: float):
    if R <= 0 or k < 2:
        raise ConfigError("bump needs R > 0 and k >= 2 for C^1 regularity")

    def value(r):
        x = np.clip(1.0 - (r / R) ** 2, 0.0, None)
        return x ** k

    def deriv(r):
        x = np.clip(1.0 - (r / R) ** 2, 0.0, None)
        return k * x ** (k - 1) * (-2.0 * r / R ** 2)

    return value, deriv, R, (R,)


def _annular_piece(a: float, w: float, h: float, k: float):
    def value(r):
        x = np.clip(1.0 - ((r - a) / w) ** 2, 0.0, None)
        return h * x ** k

    def deriv(r):
        x = np.clip(1.0 - ((r - a) / w) ** 2, 0.0, None)
        return h * k * x ** (k - 1) * (-2.0 * (r - a) / w ** 2)

    return value, deriv


def _two_bump(a1, w1, h1, a2, w2, h2, k=2.0):
    v1, d1 = _annular_piece(a1, w1, h1, k)
    v2, d2 = _annular_piece(a2, w2, h2, k)

    def value(r):
        return v1(r) + v2(r)

    def deriv(r):
        return d1(r) + d2(r)

    breaks = tuple(sorted((a1 - w1, a1 + w1, a2 - w2, a2 + w2)))
    return value, deriv, max(a1 + w1, a2 + w2), breaks


def _talenti(p: float, n: int, R: float = 20.0):
    if not (1.0 < p < n):
        raise ConfigError("talenti family needs 1 < p < n")
    q = p / (p - 1.0)
    mexp = (n - p) / p
    R0 = 0.6 * R

    def w(r):
        return _smoothstep((R - r) / (R - R0))

    def wd(r):
        return -_smoothstep_d((R - r) / (R - R0)) / (R - R0)

    def base(r):
        return (1.0 + r ** q) ** (-mexp)

    def based(r):
        return -mexp * q * r ** (q - 1.0) * (1.0 + r ** q) ** (-mexp - 1.0)

    def value(r):
        return base(r) * w(r)

    def deriv(r):
        return based(r) * w(r) + base(r) * wd(r)

    return value, deriv, R, (R0, R)


def _hardy_near_extremal(beta: float, eps: float):
    """r^-beta on [eps, 1/eps], smoothly cut at both ends.

    The cuts are sine-shaped in log r and each spans 40% of the log-range,
    leaving a pure power law on the middle fifth.  A hard truncation of the
    power law leaves an O(1/log(1/eps)) excess in the Hardy quotient; the
    sine cuts reduce this to O(1/log(1/eps)^2), so the quotient approaches
    the sharp constant as eps -> 0.
    """
    if not (0.0 < eps < 0.5):
        raise ConfigError("hardy_near_extremal needs 0 < eps < 1/2")
    if beta <= 0.0:
        raise ConfigError("hardy_near_extremal needs beta > 0")
    lam_hi = -math.log(eps)
    lam_lo = -lam_hi
    L = lam_hi - lam_lo
    W = 0.4 * L
    k = 0.5 * math.pi / W

    def _g(lam):
        rise = np.sin(k * np.clip(lam - lam_lo, 0.0, W))
        fall = np.sin(k * np.clip(lam_hi - lam, 0.0, W))
        return np.minimum(rise, fall)

    def _gd(lam):
        up = lam - lam_lo < W
        down = lam_hi - lam < W
        out = np.zeros_like(lam)
        out = np.where(up, k * np.cos(k * np.clip(lam - lam_lo, 0.0, W)), out)
        out = np.where(down, -k * np.cos(k * np.clip(lam_hi - lam, 0.0, W)), out)
        return out

    def value(r):
        r = np.asarray(r, dtype=float)
        rs = np.clip(r, eps, 1.0 / eps)
        inside = (r > eps) & (r < 1.0 / eps)
        return np.where(inside, rs ** (-beta) * _g(np.log(rs)), 0.0)

    def deriv(r):
        r = np.asarray(r, dtype=float)
        rs = np.clip(r, eps, 1.0 / eps)
        inside = (r > eps) & (r < 1.0 / eps)
        lam = np.log(rs)
        d = rs ** (-beta - 1.0) * (_gd(lam) - beta * _g(lam))
        return np.where(inside, d, 0.0)

    breaks = (eps, math.exp(lam_lo + W), math.exp(lam_hi - W), 1.0 / eps)
    return value, deriv, 1.0 / eps, breaks


_FAMILIES = {
    "gaussian": lambda params, n: _gaussian(params.get("alpha", 1.0)),
    "bump": lambda params, n: _bump(params.get("R", 1.0), params.get("k", 2.0)),
    "two_bump": lambda params, n: _two_bump(
        params.get("a1", 1.5), params.get("w1", 0.8), params.get("h1", 1.0),
        params.get("a2", 4.0), params.get("w2", 1.2), params.get("h2", 0.6),
        params.get("k", 2.0)),
    "talenti": lambda params, n: _talenti(params.get("p", 2.0), n,
                                          params.get("R", 20.0)),
    "hardy_near_extremal": lambda params, n: _hardy_near_extremal(
        params.get("beta", 0.5), params.get("eps", 0.05)),
    "annulus": lambda params, n: (_annular_piece(
        params.get("a", 1.5), params.get("w", 0.5),
        params.get("h", 1.0), params.get("k", 2.0))
        + (params.get("a", 1.5) + params.get("w", 0.5),
           (params.get("a", 1.5) - params.get("w", 0.5),
            params.get("a", 1.5) + params.get("w", 0.5)))),
}


def materialize(f: ProfileFamily, m: ModelManifold,
                grid: RadialGrid | None = None) -> RadialProfile:
    """Sample a family member on a grid, keeping its exact callables."""
    if f.name not in _FAMILIES:
        raise ConfigError(f"unknown profile family {f.name!r}")
    value, deriv, support, breaks = _FAMILIES[f.name](f.params, m.n)
    if support > m.r_max / 2:
        raise ConfigError(
            f"{f.label()} support radius {support:g} exceeds r_max/2 = {m.r_max / 2:g}")
    if grid is None:
        grid = RadialGrid.geometric(m.r_max)
    return RadialProfile(
        grid=grid,
        values=value(grid.nodes),
        derivs=deriv(grid.nodes),
        support_radius=support,
        value_fn=value,
        deriv_fn=deriv,
        family=f.label(),
        breakpoints=tuple(breaks),
    )


def integrate(m: ModelManifold, f: Callable, r_min: float | None = None,
              r_max: float | None = None, panels_per_decade: int = 16,
              origin_exponent: float = 0.0, breakpoints=()):
    """Integrate f(r) over M against the volume density.

    Returns (value, error_estimate).  ``origin_exponent`` s declares the
    leading singularity f ~ A r^-s near the origin (s < n); the unresolved
    piece below the first panel is added in closed form using phi ~ r.
    ``breakpoints`` lists radii where f has reduced smoothness (support
    edges, cutoff seams); panels are split there so Gauss panels never
    straddle a kink.
    """
    if r_max is None:
        r_max = m.r_max
    if r_min is None:
        r_min = m.quad_r_min if m.quad_r_min is not None else 1e-10 * r_max
    if origin_exponent >= m.n:
        raise IntegrabilityError(
            f"weight exponent {origin_exponent} >= dimension {m.n}: divergent integral")
    breaks = np.asarray([b for b in breakpoints if r_min < b < r_max], dtype=float)

    fine = _panel_quadrature(m, f, r_min, r_max, panels_per_decade, breaks)
    coarse = _panel_quadrature(m, f, r_min, r_max,
                               max(4, panels_per_decade // 2), breaks)
    correction = _origin_correction(m, f, r_min, origin_exponent)
    value = fine + correction
    err = abs(fine - coarse) + abs(correction) * 1e-6
    return value, err


def _panel_quadrature(m: ModelManifold, f: Callable, r_min: float,
                      r_max: float, panels_per_decade: int,
                      breaks=None) -> float:
    decades = math.log10(r_max / r_min)
    n_panels = max(8, int(math.ceil(panels_per_decade * decades)))
    edges = np.geomspace(r_min, r_max, n_panels + 1)
    if breaks is not None and len(breaks):
        edges = np.unique(np.concatenate([edges, breaks]))
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    r = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    phi, _, _ = m.warp.eval(r)
    vals = np.asarray(f(r), dtype=float) * phi ** (m.n - 1)
    if not np.all(np.isfinite(vals)):
        raise IntegrabilityError("integrand evaluated non-finite inside working range")
    return m.volume_coeff * float(np.einsum("pk,k,p->", vals, _GL_WEIGHTS, half))


def _origin_correction(m: ModelManifold, f: Callable, r_min: float,
                       s: float) -> float:
    if m.vertex_singular:
        return 0.0  # exact-cone models are only used away from the vertex
    amp = float(np.asarray(f(np.array([r_min]))).ravel()[0]) * r_min ** s
    slope = 1.0 if m.warp.kind != "cone" else m.warp.c
    return m.volume_coeff * amp * slope ** (m.n - 1) \
        * r_min ** (m.n - s) / (m.n - s)


def save_profile(u: RadialProfile, path) -> None:
    """Write a two-column (r, u) text file."""
    np.savetxt(path, np.column_stack([u.grid.nodes, u.values]),
               header="r u", comments="# ")


def load_profile(path, support_radius: float | None = None) -> RadialProfile:
    """Read a two-column (r, u) text file into a tabulated profile."""
    data = np.loadtxt(path)
    r, v = data[:, 0], data[:, 1]
    grid = RadialGrid(r)
    if support_radius is None:
        nz = np.nonzero(v)[0]
        support_radius = float(r[nz[-1]]) if nz.size else float(r[0])
    d = np.gradient(v, r)
    return RadialProfile(grid=grid, values=v, derivs=d,
                         support_radius=support_radius, family="tabulated")
