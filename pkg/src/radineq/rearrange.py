"""Distribution functions and Euclidean rearrangement.

The rearrangement u* of a radial function u on a model M is the radially
symmetric nonincreasing function on R^n whose superlevel sets match those
of |u| in measure.  Monotone profiles admit an exact transport construction
(level sets are balls); general profiles go through the distribution
function with root-bracketed level sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .manifold import ModelManifold
from .radial import RadialGrid, RadialProfile

__all__ = [
    "DistributionFunction",
    "distribution",
    "rearrange",
    "euclidean_counterpart",
]

_T_FLOOR_FRACTION = 1e-13
_BISECT_ITERS = 60


def euclidean_counterpart(m: ModelManifold) -> ModelManifold:
    """The Euclidean model receiving rearrangements from ``m``."""
    return ModelManifold.euclidean(m.n, r_max=m.r_max)


@dataclass(eq=False)
class DistributionFunction:
    """mu(t) = |{ |u| > t }| sampled on a decreasing t-grid.

    ``dmu_values`` holds the coarea derivative mu'(t) =
    -sum_j V'(r_j)/|u'(r_j)| over the level-set boundary radii r_j
    (-inf at critical values, where the level set degenerates)."""

    t_nodes: np.ndarray
    mu_values: np.ndarray
    dmu_values: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.t_nodes = np.asarray(self.t_nodes, dtype=float)
        self.mu_values = np.asarray(self.mu_values, dtype=float)
        if self.dmu_values is not None:
            self.dmu_values = np.asarray(self.dmu_values, dtype=float)

    def mu_at(self, t):
        """Monotone interpolation of mu; 0 beyond the largest t-node."""
        t = np.asarray(t, dtype=float)
        # t_nodes descend; np.interp needs ascending abscissae.
        out = np.interp(t, self.t_nodes[::-1], self.mu_values[::-1],
                        left=self.mu_values[-1], right=0.0)
        return out


def _sample_abs(u: RadialProfile):
    r = u.grid.nodes
    v = np.abs(np.asarray(u(r), dtype=float))
    v0 = float(np.abs(np.asarray(u(np.array([0.0]))).ravel()[0]))
    return r, v, v0


def _critical_points(u: RadialProfile, r: np.ndarray):
    """Interior extrema of u, refined by bisection on the derivative.

    Grid sampling alone misses the thin slab between a sampled peak value
    and the true peak value (an O(h^2) systematic error in every norm of
    the rearrangement), so level-set extraction needs the exact peaks.
    """
    d = np.asarray(u.deriv(r), dtype=float)
    s = np.sign(d)
    flip = s[:-1] * s[1:] < 0
    (ci,) = np.nonzero(flip)
    if ci.size:
        lo = r[ci].copy()
        hi = r[ci + 1].copy()
        lo_sign = s[ci]
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            same = np.sign(np.asarray(u.deriv(mid), dtype=float)) == lo_sign
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        r_c = 0.5 * (lo + hi)
        v_c = np.abs(np.asarray(u(r_c), dtype=float))
    else:
        r_c = np.array([])
        v_c = np.array([])
    # interpolated profiles (pchip) pin the derivative to exactly zero at
    # extremum nodes, so the sign product never flips there; those nodes
    # are themselves exact extrema of the interpolant
    (zi,) = np.nonzero(s == 0.0)
    zi = zi[(zi > 0) & (zi < r.size - 1)]
    if zi.size:
        r_c = np.concatenate([r_c, r[zi]])
        v_c = np.concatenate([v_c, np.abs(np.asarray(u(r[zi]), dtype=float))])
    keep = v_c > 0
    return r_c[keep], v_c[keep]


def _t_grid(v: np.ndarray, v0: float, n_t: int,
            v_crit: np.ndarray | None = None) -> np.ndarray:
    vmax = max(float(v.max()), v0)
    pos = np.sort(v[v > 0])
    if pos.size == 0:
        return np.array([vmax])
    idx = np.unique(np.linspace(0, pos.size - 1, max(2, n_t - 2)).astype(int))
    interior = pos[idx]
    extra = [np.array([v0])]
    if v_crit is not None and v_crit.size:
        # cluster geometrically toward each critical value: mu(t) has a
        # square-root branch at local maxima and a kink at local minima
        offs = np.power(10.0, -np.arange(2.0, 13.0, 0.5))
        vc = v_crit[:, None]
        extra.append((vc * (1.0 - offs)).ravel())
        extra.append((vc * (1.0 + offs)).ravel())
        extra.append(v_crit)
    interior = np.concatenate([interior] + extra)
    interior = interior[(interior > _T_FLOOR_FRACTION * vmax) & (interior < vmax)]
    t = np.unique(np.concatenate(
        [[vmax, _T_FLOOR_FRACTION * vmax], interior]))[::-1]
    return t


def _crossings(u: RadialProfile, r: np.ndarray, v: np.ndarray, v0: float,
               t_nodes: np.ndarray):
    """Level-set boundaries for every t, refined by vectorized bisection.

    Returns a list (per t) of sorted crossing radii, each exact to
    ~2^-60 of the bracketing cell.
    """
    # augment with the pole value and a trailing zero beyond support
    r_aug = np.concatenate(([0.0], r))
    v_aug = np.concatenate(([v0], v))
    above = v_aug[None, :] > t_nodes[:, None]          # (T, N+1)
    flip = above[:, :-1] != above[:, 1:]               # (T, N)
    ti, ci = np.nonzero(flip)
    lo = r_aug[ci].copy()
    hi = r_aug[ci + 1].copy()
    tt = t_nodes[ti]
    lo_above = above[ti, ci]

    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        fm = np.abs(np.asarray(u(mid), dtype=float)) > tt
        same = fm == lo_above
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)

    per_t: list[np.ndarray] = []
    start_above: list[bool] = []
    for k in range(t_nodes.size):
        sel = ti == k
        per_t.append(np.sort(roots[sel]))
        start_above.append(bool(above[k, 0]))
    return per_t, start_above


def distribution(u: RadialProfile, m: ModelManifold, n_t: int = 512,
                 t_nodes: np.ndarray | None = None) -> DistributionFunction:
    """Distribution function of |u| on M.

    Level sets are finite unions of radial intervals; each interval's
    volume is a difference of ball volumes.  Passing explicit ``t_nodes``
    (descending) evaluates mu exactly at those levels, which is the right
    way to compare two profiles for equimeasurability.
    """
    r, v, v0 = _sample_abs(u)
    r_c, v_c = _critical_points(u, r)
    if r_c.size:
        order = np.argsort(np.concatenate([r, r_c]))
        r = np.concatenate([r, r_c])[order]
        v = np.concatenate([v, v_c])[order]
    if t_nodes is None:
        t_nodes = _t_grid(v, v0, n_t, v_crit=v_c if r_c.size else None)
    else:
        t_nodes = np.asarray(t_nodes, dtype=float)
    per_t, start_above = _crossings(u, r, v, v0, t_nodes)

    all_roots = np.concatenate([p for p in per_t if p.size]) \
        if any(p.size for p in per_t) else np.array([])
    vols = {}
    if all_roots.size:
        uniq = np.unique(all_roots)
        V = np.asarray(m.ball_volume(uniq), dtype=float)
        vols = dict(zip(uniq.tolist(), V.tolist()))

    mu = np.empty_like(t_nodes)
    dmu = np.empty_like(t_nodes)
    for k, roots in enumerate(per_t):
        bounds = roots.tolist()
        if start_above[k]:
            bounds = [0.0] + bounds
        if len(bounds) % 2 == 1:
            # level set extends to r_max; close it there (support < r_max
            # makes this unreachable for valid profiles, but stay safe)
            bounds = bounds + [u.grid.r_max]
        total = 0.0
        for a, b in zip(bounds[0::2], bounds[1::2]):
            va = 0.0 if a == 0.0 else vols.get(a, float(m.ball_volume(a)))
            vb = vols.get(b, float(m.ball_volume(b)))
            total += vb - va
        mu[k] = total
        if roots.size:
            phi, _, _ = m.warp.eval(roots)
            area = m.volume_coeff * phi ** (m.n - 1)
            slope = np.abs(np.asarray(u.deriv(roots), dtype=float))
            with np.errstate(divide="ignore"):
                dmu[k] = -float(np.sum(area / slope))
        else:
            dmu[k] = 0.0
    return DistributionFunction(t_nodes=t_nodes, mu_values=mu, dmu_values=dmu)


def _rearrange_monotone(u: RadialProfile, m: ModelManifold) -> RadialProfile:
    """Exact transport construction for nonincreasing |u|: superlevel sets
    are balls, so u*(rho) = |u|(r) with omega_n rho^n = V(r)."""
    n = m.n
    omega = m.omega_n

    if m.is_euclidean:
        def value(rr):
            return np.abs(np.asarray(u(rr), dtype=float))

        def deriv(rr):
            s = np.sign(np.asarray(u(rr), dtype=float))
            return np.where(s == 0, 1.0, s) * np.asarray(u.deriv(rr), dtype=float)

        return RadialProfile(
            grid=u.grid, values=np.abs(u.values), derivs=deriv(u.grid.nodes),
            support_radius=u.support_radius, value_fn=value, deriv_fn=deriv,
            family=u.family + "*", breakpoints=u.breakpoints)

    r_nodes = u.grid.nodes
    V_nodes = np.asarray(m.ball_volume(r_nodes), dtype=float)
    rho_nodes = (V_nodes / omega) ** (1.0 / n)
    coeff = m.volume_coeff

    # r as a function of rho: Hermite data is exact (dr/drho =
    # n omega rho^(n-1) / V'(r)), so the spline replaces per-evaluation
    # Newton inversion at no accuracy cost
    phi_nodes, _, _ = m.warp.eval(r_nodes)
    drdrho = n * omega * rho_nodes ** (n - 1) / (coeff * phi_nodes ** (n - 1))
    r_spline = CubicHermiteSpline(rho_nodes, r_nodes, drdrho,
                                  extrapolate=False)
    inner_slope = r_nodes[0] / rho_nodes[0]

    def r_of_rho(rho):
        rho = np.asarray(rho, dtype=float)
        rr = r_spline(np.clip(rho, rho_nodes[0], rho_nodes[-1]))
        # below the first node phi ~ r, so the map is linear to O(rho^2)
        return np.where(rho < rho_nodes[0], rho * inner_slope, rr)

    rho_support = float((m.ball_volume(u.support_radius) / omega) ** (1.0 / n))

    def value(rho):
        return np.abs(np.asarray(u(r_of_rho(rho)), dtype=float))

    def deriv(rho):
        rho = np.asarray(rho, dtype=float)
        rr = r_of_rho(rho)
        phi, _, _ = m.warp.eval(rr)
        s = np.sign(np.asarray(u(rr), dtype=float))
        du = np.where(s == 0, 1.0, s) * np.asarray(u.deriv(rr), dtype=float)
        return du * (rho / phi) ** (n - 1)

    breaks = tuple(
        float((np.asarray(m.ball_volume(b)) / omega) ** (1.0 / n))
        for b in u.breakpoints if b < u.support_radius) + (rho_support,)
    grid = RadialGrid(rho_nodes)
    return RadialProfile(
        grid=grid, values=np.abs(u.values), derivs=deriv(rho_nodes),
        support_radius=rho_support, value_fn=value, deriv_fn=deriv,
        family=u.family + "*", breakpoints=breaks)


def _rearrange_general(u: RadialProfile, m: ModelManifold,
                       n_t: int) -> RadialProfile:
    """Inversion of the distribution function on its t-grid."""
    n = m.n
    omega = m.omega_n
    dist = distribution(u, m, n_t=n_t)
    rho = (dist.mu_values / omega) ** (1.0 / n)
    t = dist.t_nodes

    # rho ascends as t descends; drop exact duplicates (plateaus in u)
    keep = np.concatenate(([True], np.diff(rho) > 0))
    x = rho[keep]
    y = t[keep]
    # exact transport slope du*/drho = n omega rho^(n-1) / mu'(t); Hermite
    # data beats shape-preserving interpolation by two orders in h
    dmu = dist.dmu_values[keep]
    with np.errstate(divide="ignore", invalid="ignore"):
        dydx = n * omega * x ** (n - 1) / dmu
    dydx = np.where(np.isfinite(dydx), dydx, 0.0)
    dydx = np.minimum(dydx, 0.0)
    if x[0] > 0.0:
        x = np.concatenate(([0.0], x))
        y = np.concatenate(([y[0]], y))
        dydx = np.concatenate(([0.0], dydx))
    interp = CubicHermiteSpline(x, y, dydx, extrapolate=False)
    dinterp = interp.derivative()
    rho_support = float(x[-1])

    def value(rr):
        rr = np.asarray(rr, dtype=float)
        out = interp(np.clip(rr, 0.0, rho_support))
        return np.clip(np.nan_to_num(out, nan=0.0), 0.0, None)

    def deriv(rr):
        rr = np.asarray(rr, dtype=float)
        out = dinterp(np.clip(rr, 0.0, rho_support))
        return np.nan_to_num(out, nan=0.0)

    # kinks of u* sit where the level t crosses a critical value of u
    _, v_c = _critical_points(u, u.grid.nodes)
    breaks = tuple(float(np.interp(t_c, y[::-1], x[::-1]))
                   for t_c in v_c if y[-1] < t_c < y[0]) + (rho_support,)
    grid = RadialGrid.geometric(u.grid.r_max, n_nodes=u.grid.nodes.size)
    return RadialProfile(
        grid=grid, values=value(grid.nodes), derivs=deriv(grid.nodes),
        support_radius=rho_support, value_fn=value, deriv_fn=deriv,
        family=u.family + "*", breakpoints=breaks)


def rearrange(u: RadialProfile, m: ModelManifold,
              n_t: int = 1024) -> RadialProfile:
    """Euclidean rearrangement u* of ``u`` on ``m``.

    The result lives on ``euclidean_counterpart(m)``.
    """
    if u.is_nonincreasing():
        return _rearrange_monotone(u, m)
    return _rearrange_general(u, m, n_t)
