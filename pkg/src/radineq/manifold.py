"""Rotationally symmetric model manifolds.

A model is determined by a dimension n >= 3 and a warp function phi, giving
the metric dr^2 + phi(r)^2 * (round unit-sphere metric).  All radial geometry
(volumes, asymptotic volume ratio, radial Laplacian, Ricci signs) follows
from phi and its first two derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from . import _kernels
from .errors import ConvergenceError, DomainError

__all__ = [
    "WarpFunction",
    "ModelManifold",
    "RicciReport",
    "unit_ball_volume",
    "warp_eval",
    "ricci_check",
    "ball_volume",
    "avr",
    "laplacian_r",
]

# Beyond this many delta-scales the tanh term is 1 to machine precision and
# the smoothed cone volume integral continues with a closed form.
_LINEAR_TAIL_SCALES = 40.0


@lru_cache(maxsize=None)
def unit_ball_volume(n: int) -> float:
    """Volume omega_n of the unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


@dataclass(eq=False)
class WarpFunction:
    """Warp profile phi defining a rotationally symmetric metric.

    Kinds:
      * ``euclidean``      phi(r) = r
      * ``cone``           phi(r) = c*r (singular vertex; degenerate model)
      * ``smoothed_cone``  phi(r) = c*r + (1-c)*delta*tanh(r/delta)
      * ``tabulated``      monotone cubic Hermite from supplied samples
    """

    kind: str
    c: float = 1.0
    delta: float = 1.0
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    d1: np.ndarray | None = None
    d2: np.ndarray | None = None
    _spline: CubicHermiteSpline | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind in ("cone", "smoothed_cone"):
            if not (0.0 < self.c <= 1.0):
                raise DomainError(f"cone slope c={self.c} must lie in (0, 1]")
            if self.delta <= 0.0:
                raise DomainError(f"smoothing scale delta={self.delta} must be positive")
        elif self.kind == "tabulated":
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.values, dtype=float)
            d1 = np.asarray(self.d1, dtype=float)
            if g[0] != 0.0 or v[0] != 0.0:
                raise DomainError("tabulated warp must start at phi(0) = 0")
            if abs(d1[0] - 1.0) > 1e-10:
                raise DomainError("tabulated warp must have phi'(0) = 1")
            if np.any(np.diff(g) <= 0):
                raise DomainError("tabulated warp grid must be strictly increasing")
            self.grid, self.values, self.d1 = g, v, d1
            self.d2 = None if self.d2 is None else np.asarray(self.d2, dtype=float)
            self._spline = CubicHermiteSpline(g, v, d1)
        elif self.kind != "euclidean":
            raise DomainError(f"unknown warp kind {self.kind!r}")

    @classmethod
    def euclidean(cls) -> "WarpFunction":
        return cls(kind="euclidean")

    @classmethod
    def smoothed_cone(cls, c: float, delta: float = 1.0) -> "WarpFunction":
        return cls(kind="smoothed_cone", c=c, delta=delta)

    @classmethod
    def cone(cls, c: float) -> "WarpFunction":
        return cls(kind="cone", c=c)

    @classmethod
    def tabulated(cls, grid, values, d1, d2=None) -> "WarpFunction":
        return cls(kind="tabulated", grid=grid, values=values, d1=d1, d2=d2)

    def eval(self, r):
        """Return (phi, phi', phi'') at radii ``r`` (scalar or array)."""
        r = np.asarray(r, dtype=float)
        if self.kind == "euclidean":
            return r.copy(), np.ones_like(r), np.zeros_like(r)
        if self.kind == "cone":
            return self.c * r, np.full_like(r, self.c), np.zeros_like(r)
        if self.kind == "smoothed_cone":
            return _kernels.smoothed_cone_eval(r, self.c, self.delta)
        sp = self._spline
        if self.d2 is not None:
            d2 = np.interp(r, self.grid, self.d2)
        else:
            d2 = sp.derivative(2)(r)
        return sp(r), sp.derivative()(r), d2

    @property
    def asymptotic_slope(self) -> float:
        """Limit of phi(r)/r, when it exists."""
        if self.kind == "euclidean":
            return 1.0
        if self.kind in ("cone", "smoothed_cone"):
            return self.c
        return float(self.d1[-1])


@dataclass(eq=False)
class ModelManifold:
    """A warped-product model with dimension n, warp phi and truncation r_max."""

    n: int
    warp: WarpFunction
    r_max: float = 50.0
    quad_r_min: float | None = None  # quadrature floor override (wide models)

    def __post_init__(self) -> None:
        if self.n < 3:
            raise DomainError(f"dimension n={self.n} must be >= 3")
        if self.r_max <= 0:
            raise DomainError("r_max must be positive")
        self._theta: float | None = None

    @classmethod
    def euclidean(cls, n: int, r_max: float = 50.0,
                  quad_r_min: float | None = None) -> "ModelManifold":
        return cls(n=n, warp=WarpFunction.euclidean(), r_max=r_max,
                   quad_r_min=quad_r_min)

    @classmethod
    def smoothed_cone(cls, n: int, c: float, delta: float = 1.0,
                      r_max: float = 50.0) -> "ModelManifold":
        return cls(n=n, warp=WarpFunction.smoothed_cone(c, delta), r_max=r_max)

    @property
    def is_euclidean(self) -> bool:
        return self.warp.kind == "euclidean" or (
            self.warp.kind in ("cone", "smoothed_cone") and self.warp.c == 1.0
        )

    @property
    def vertex_singular(self) -> bool:
        """Exact cones with c < 1 have a singular vertex; integrands must
        avoid a neighborhood of the origin there."""
        return self.warp.kind == "cone" and self.warp.c < 1.0

    @property
    def omega_n(self) -> float:
        return unit_ball_volume(self.n)

    @property
    def volume_coeff(self) -> float:
        """n * omega_n, the area of the unit sphere in R^n."""
        return self.n * unit_ball_volume(self.n)

    # -- geometry ---------------------------------------------------------

    def _check_radius(self, r, allow_beyond: bool = False) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise DomainError("radius must be positive")
        if not allow_beyond and np.any(r > self.r_max * (1 + 1e-12)):
            raise DomainError(f"radius exceeds working range r_max={self.r_max}")
        return r

    def warp_eval(self, r, allow_beyond: bool = False):
        r = self._check_radius(r, allow_beyond)
        return self.warp.eval(r)

    def ball_volume(self, r, allow_beyond: bool = False):
        """Volume of the geodesic ball of radius r about the pole."""
        r = self._check_radius(r, allow_beyond)
        w = self.warp
        n = self.n
        if w.kind == "euclidean" or (w.kind in ("cone", "smoothed_cone") and w.c == 1.0):
            return self.omega_n * r ** n
        if w.kind == "cone":
            return self.omega_n * w.c ** (n - 1) * r ** n
        if w.kind == "smoothed_cone":
            return self.volume_coeff * self._smoothed_cone_integral(r)
        return self.volume_coeff * self._tabulated_integral(r)

    def _smoothed_cone_integral(self, r: np.ndarray):
        """integral_0^r phi^(n-1) ds for the smoothed cone, with the linear
        tail handled in closed form beyond _LINEAR_TAIL_SCALES * delta."""
        c, delta, n = self.warp.c, self.warp.delta, self.n
        cap = _LINEAR_TAIL_SCALES * delta
        rr = np.atleast_1d(np.asarray(r, dtype=float))
        head = np.minimum(rr, cap)
        out = _kernels.ball_volume_integral_smoothed_cone(head, c, delta, n)
        tail = rr > cap
        if np.any(tail):
            # For s > cap: phi(s) = c*s + (1-c)*delta exactly (tanh == 1).
            d = (1.0 - c) * delta
            hi = (c * rr[tail] + d) ** n
            lo = (c * cap + d) ** n
            out[tail] += (hi - lo) / (c * n)
        return out if np.ndim(r) else float(out[0])

    def _tabulated_integral(self, r: np.ndarray):
        sp = self.warp._spline
        n = self.n

        def dens(s):
            return float(sp(s)) ** (n - 1)

        rr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.array([quad(dens, 0.0, float(x), epsabs=1e-13, epsrel=1e-12,
                             limit=200)[0] for x in rr])
        return out if np.ndim(r) else float(out[0])

    def volume_ratio(self, r, allow_beyond: bool = False):
        """V(r) / (omega_n r^n), the Bishop-Gromov monotone quantity."""
        r = np.asarray(r, dtype=float)
        return self.ball_volume(r, allow_beyond=allow_beyond) / (self.omega_n * r ** self.n)

    def avr(self, rel_tol: float = 1e-8) -> float:
        """Asymptotic volume ratio theta = lim V(r)/(omega_n r^n).

        Evaluates the ratio at geometrically growing probe radii with one
        Richardson extrapolation step in 1/r; converged when two successive
        extrapolants agree to ``rel_tol`` relative.
        """
        if self._theta is not None:
            return self._theta
        if self.is_euclidean:
            self._theta = 1.0
            return 1.0
        if self.warp.kind == "cone":
            self._theta = self.warp.c ** (self.n - 1)
            return self._theta
        if self.warp.kind == "tabulated":
            # Continue phi with its terminal linear asymptote.
            slope = self.warp.asymptotic_slope
            b = float(self.warp.values[-1]) - slope * float(self.warp.grid[-1])
            r_end = float(self.warp.grid[-1])
            v_end = float(self.ball_volume(r_end))

            def ratio(R):
                tail = ((slope * R + b) ** self.n - (slope * r_end + b) ** self.n) \
                    / (slope * self.n)
                return (v_end + self.volume_coeff * tail) / (self.omega_n * R ** self.n)
        else:
            def ratio(R):
                return float(self.volume_ratio(R, allow_beyond=True))

        scale = self.warp.delta if self.warp.kind == "smoothed_cone" else self.r_max
        R = 100.0 * scale
        prev = None
        for _ in range(40):
            extrap = 2.0 * ratio(2.0 * R) - ratio(R)
            if prev is not None and abs(extrap - prev) <= rel_tol * max(abs(extrap), 1e-300):
                if not (0.0 < extrap <= 1.0 + 1e-9):
                    raise ConvergenceError(f"AVR limit {extrap} outside (0, 1]")
                self._theta = min(extrap, 1.0)
                return self._theta
            prev = extrap
            R *= 2.0
        raise ConvergenceError("volume ratio did not converge over probe radii")

    def laplacian_r(self, r, allow_beyond: bool = False):
        """Radial Laplacian Delta r = (n-1) phi'/phi."""
        r = self._check_radius(r, allow_beyond)
        phi, dphi, _ = self.warp.eval(r)
        return (self.n - 1) * dphi / phi

    def ricci(self, r):
        """Radial and tangential Ricci curvatures (sectional combinations).

        Ric_rad = -(n-1) phi''/phi,  Ric_tan = -phi''/phi + (n-2)(1-phi'^2)/phi^2.
        """
        r = self._check_radius(r)
        n = self.n
        w = self.warp
        if w.kind == "euclidean" or (w.kind in ("cone", "smoothed_cone") and w.c == 1.0):
            z = np.zeros_like(r)
            return z, z.copy()
        if w.kind == "cone":
            rad = np.zeros_like(r)
            tan = (n - 2) * (1.0 - w.c ** 2) / (w.c * r) ** 2
            return rad, tan
        if w.kind == "smoothed_cone":
            # Cancellation-free form: 1 - phi'^2 = (1-c) t^2 (1 + phi').
            c, delta = w.c, w.delta
            t = np.tanh(r / delta)
            sech2 = 1.0 - t * t
            phi = c * r + (1.0 - c) * delta * t
            dphi = c + (1.0 - c) * sech2
            ddphi = -2.0 * (1.0 - c) / delta * sech2 * t
            rad = -(n - 1) * ddphi / phi
            tan = -ddphi / phi + (n - 2) * (1.0 - c) * t * t * (1.0 + dphi) / phi ** 2
            return rad, tan
        phi, dphi, ddphi = w.eval(r)
        rad = -(n - 1) * ddphi / phi
        tan = -ddphi / phi + (n - 2) * (1.0 - dphi ** 2) / phi ** 2
        return rad, tan


@dataclass
class RicciReport:
    """Minimum Ricci curvatures of a model over a radial grid."""

    min_radial: float
    min_tangential: float
    argmin_radial: float
    argmin_tangential: float
    tolerance: float
    nonnegative: bool


# -- module-level operation wrappers --------------------------------------

def warp_eval(m: ModelManifold, r):
    return m.warp_eval(r)


def ball_volume(m: ModelManifold, r):
    return m.ball_volume(r)


def avr(m: ModelManifold) -> float:
    return m.avr()


def laplacian_r(m: ModelManifold, r):
    return m.laplacian_r(r)


def ricci_check(m: ModelManifold, grid, tolerance: float = 1e-9) -> RicciReport:
    """Minimum radial/tangential Ricci over ``grid`` (array of radii)."""
    nodes = np.asarray(getattr(grid, "nodes", grid), dtype=float)
    rad, tan = m.ricci(nodes)
    i, j = int(np.argmin(rad)), int(np.argmin(tan))
    return RicciReport(
        min_radial=float(rad[i]),
        min_tangential=float(tan[j]),
        argmin_radial=float(nodes[i]),
        argmin_tangential=float(nodes[j]),
        tolerance=tolerance,
        nonnegative=bool(rad[i] >= -tolerance and tan[j] >= -tolerance),
    )
