"""Inequality and proof-identity checks, reported as signed deficits.

Every check produces an InequalityReport with deficit = rhs - constant*lhs
(sides arranged so a valid instance has nonnegative deficit).  Tolerances
combine a scale-free base with 10x the propagated quadrature error, and,
for estimated constants, the estimate's bracket width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import (ConstantEstimate, chs_constant, ckn_admissible_a_max,
                        ckn_constant, hardy_constant, hpw_constant)
from .errors import ParameterError
from .functionals import (WeightSpec, gradient_energy, lp_energy, weighted_lp)
from .manifold import ModelManifold
from .radial import RadialProfile
from .rearrange import euclidean_counterpart, rearrange

__all__ = [
    "HsParams",
    "CknParams",
    "InequalityReport",
    "polya_szego_check",
    "sym_lemma_check",
    "hardy_check",
    "hpw_check",
    "hardy_sobolev_check",
    "ckn_check",
    "ckn_ibp_check",
    "bishop_gromov_check",
]

BASE_REL_TOL = 1e-8
ERROR_FACTOR = 10.0


@dataclass(frozen=True)
class HsParams:
    """Hardy-Sobolev parameters: 1 < p < n, 0 <= s <= p."""

    p: float
    s: float

    def validate(self, n: int) -> None:
        if not (1.0 < self.p < n):
            raise ParameterError(
                f"Hardy-Sobolev requires 1 < p < n; got p={self.p}, n={n}")
        if not (0.0 <= self.s <= self.p):
            raise ParameterError(
                f"Hardy-Sobolev requires 0 <= s <= p; got s={self.s}")


@dataclass(frozen=True)
class CknParams:
    """CKN parameters a, b with the theta-dependent admissible range of a."""

    a: float
    b: float

    def p(self, n: int) -> float:
        return 2.0 * n / (n - 2.0 + 2.0 * (self.b - self.a))

    def s_eff(self, n: int) -> float:
        return self.p(n) * (self.b - self.a)

    def gamma(self, n: int) -> float:
        return self.a * (n - 2.0 - self.a)

    def validate(self, n: int, theta: float) -> None:
        a_max = ckn_admissible_a_max(n, theta)
        if not (0.0 <= self.a < a_max - 1e-12):
            raise ParameterError(
                f"CKN requires 0 <= a < {a_max:.6g} "
                f"(theta={theta:.6g}); got a={self.a}")
        if not (self.a <= self.b <= self.a + 1.0):
            raise ParameterError(
                f"CKN requires a <= b <= a+1; got a={self.a}, b={self.b}")


@dataclass
class InequalityReport:
    """One verified inequality instance."""

    name: str
    params: dict
    manifold: str
    profile: str
    constant: float
    lhs: float
    rhs: float
    deficit: float
    tolerance: float
    passed: bool
    theta: float = 1.0
    n: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "manifold": self.manifold,
            "n": self.n,
            "theta": self.theta,
            "profile": self.profile,
            "params": self.params,
            "constant": self.constant,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.extra:
            d["extra"] = self.extra
        return d


def _report(name, params, m, u_tag, constant, lhs, rhs, quad_err,
            extra_tol=0.0, rel_tol=BASE_REL_TOL, extra=None) -> InequalityReport:
    deficit = rhs - constant * lhs
    scale = max(abs(rhs), abs(constant * lhs))
    tol = rel_tol * scale + ERROR_FACTOR * quad_err + extra_tol
    return InequalityReport(
        name=name, params=params, manifold=_label(m), profile=u_tag,
        constant=constant, lhs=lhs, rhs=rhs, deficit=deficit, tolerance=tol,
        passed=bool(deficit >= -tol), theta=m.avr(), n=m.n,
        extra=extra or {},
    )


def _label(m: ModelManifold) -> str:
    w = m.warp
    if m.is_euclidean:
        return f"euclidean(n={m.n})"
    if w.kind == "smoothed_cone":
        return f"cone(c={w.c:g},delta={w.delta:g},n={m.n})"
    if w.kind == "cone":
        return f"exact_cone(c={w.c:g},n={m.n})"
    return f"tabulated(n={m.n})"


def _tag(u: RadialProfile) -> str:
    return u.family or "profile"


def polya_szego_check(u: RadialProfile, m: ModelManifold, p: float = 2.0,
                      u_star: RadialProfile | None = None) -> InequalityReport:
    """||Du||_{L^p(M)} >= theta^{1/n} ||Du*||_{L^p(R^n)}."""
    if p <= 1:
        raise ParameterError("Polya-Szego requires p > 1")
    if u_star is None:
        u_star = rearrange(u, m)
    eucl = euclidean_counterpart(m)
    rhs_e = gradient_energy(u, m, p)
    lhs_e = gradient_energy(u_star, eucl, p)
    rhs = rhs_e.value ** (1.0 / p)
    lhs = lhs_e.value ** (1.0 / p)
    theta = m.avr()
    constant = theta ** (1.0 / m.n)
    quad_err = _norm_err(rhs_e, p) + constant * _norm_err(lhs_e, p)
    return _report("polya_szego", {"p": p}, m, _tag(u), constant, lhs, rhs,
                   quad_err)


def _norm_err(e, p: float) -> float:
    if e.value <= 0.0:
        return e.quadrature_error
    return e.quadrature_error * e.value ** (1.0 / p) / (p * e.value)


def sym_lemma_check(u: RadialProfile, m: ModelManifold, w: WeightSpec,
                    p: float = 2.0,
                    u_star: RadialProfile | None = None) -> InequalityReport:
    """Monotone-weight rearrangement comparison.

    Nonincreasing w: int_M |u|^p w(r) <= int_{R^n} (u*)^p w(|x|);
    increasing w: the reverse.  Constant w degenerates to norm equality.
    """
    if u_star is None:
        u_star = rearrange(u, m)
    eucl = euclidean_counterpart(m)
    on_m = weighted_lp(u, m, w, p)
    on_e = weighted_lp(u_star, eucl, w, p)
    mono = w.monotonicity
    if mono == "increasing":
        lhs, rhs = on_e, on_m
    else:
        lhs, rhs = on_m, on_e
    quad_err = on_m.quadrature_error + on_e.quadrature_error
    rel = 1e-6 if mono == "constant" else BASE_REL_TOL
    rep = _report("sym_lemma", {"p": p, "weight": w.form,
                                "exponent": w.effective_exponent},
                  m, _tag(u), 1.0, lhs.value, rhs.value, quad_err, rel_tol=rel)
    if mono == "constant":
        # equality case: both directions must hold
        rep.passed = bool(abs(rep.deficit) <= rep.tolerance)
    return rep


def hardy_check(u: RadialProfile, m: ModelManifold, p: float = 2.0,
                **kw) -> InequalityReport:
    """theta^{p/n} ((n-p)/p)^p int |u|^p/r^p <= int |Du|^p."""
    n = m.n
    if not (1.0 < p < n):
        raise ParameterError(f"Hardy requires 1 < p < n; got p={p}, n={n}")
    theta = m.avr()
    constant = theta ** (p / n) * hardy_constant(n, p)
    rhs = gradient_energy(u, m, p)
    lhs = weighted_lp(u, m, WeightSpec.power(-p), p)
    quad_err = rhs.quadrature_error + constant * lhs.quadrature_error
    return _report("hardy", {"p": p}, m, _tag(u), constant, lhs.value,
                   rhs.value, quad_err)


def hpw_check(u: RadialProfile, m: ModelManifold, **kw) -> InequalityReport:
    """(int r^2 u^2)(int |Du|^2) >= theta^{2/n} (n^2/4) (int u^2)^2."""
    n = m.n
    theta = m.avr()
    constant = theta ** (2.0 / n) * hpw_constant(n)
    moment = weighted_lp(u, m, WeightSpec.power(2.0), 2.0)
    energy = gradient_energy(u, m, 2.0)
    mass = lp_energy(u, m, 2.0)
    rhs = moment.value * energy.value
    lhs = mass.value ** 2
    quad_err = (moment.quadrature_error * energy.value
                + energy.quadrature_error * moment.value
                + constant * 2.0 * mass.value * mass.quadrature_error)
    return _report("hpw", {}, m, _tag(u), constant, lhs, rhs, quad_err)


def hardy_sobolev_check(u: RadialProfile, m: ModelManifold, hs: HsParams,
                        seed: int = 0, budget: int = 2000,
                        restarts: int = 3) -> InequalityReport:
    """theta^{p/n} C_HS(s,p) (int |u|^q / r^s)^{(n-p)/(n-s)} <= int |Du|^p,
    q = p(n-s)/(n-p)."""
    n = m.n
    hs.validate(n)
    p, s = hs.p, hs.s
    theta = m.avr()
    chs = chs_constant(n, p, s, seed=seed, budget=budget, restarts=restarts)
    constant = theta ** (p / n) * chs.value
    q = p * (n - s) / (n - p)
    rhs = gradient_energy(u, m, p)
    inner = weighted_lp(u, m, WeightSpec.power(-s), q)
    expo = (n - p) / (n - s)
    lhs = inner.value ** expo
    lhs_err = (expo * inner.value ** (expo - 1.0) * inner.quadrature_error
               if inner.value > 0 else inner.quadrature_error)
    quad_err = rhs.quadrature_error + constant * lhs_err
    extra_tol = theta ** (p / n) * chs.bracket_width * lhs
    return _report("hardy_sobolev", {"p": p, "s": s}, m, _tag(u), constant,
                   lhs, rhs.value, quad_err, extra_tol=extra_tol,
                   extra={"chs_method": chs.method})


def ckn_check(u: RadialProfile, m: ModelManifold, ck: CknParams,
              seed: int = 0, budget: int = 2000,
              restarts: int = 3) -> InequalityReport:
    """C(a,b,theta) (int r^{-bp} |u|^p)^{2/p} <= int r^{-2a} |Du|^2."""
    n = m.n
    theta = m.avr()
    ck.validate(n, theta)
    a, b = ck.a, ck.b
    p = ck.p(n)
    est = ckn_constant(n, a, b, theta, seed=seed, budget=budget,
                       restarts=restarts)
    rhs = gradient_energy(u, m, 2.0, weight=WeightSpec.power(-2.0 * a))
    inner = weighted_lp(u, m, WeightSpec.power(-b * p), p)
    lhs = inner.value ** (2.0 / p)
    lhs_err = ((2.0 / p) * inner.value ** (2.0 / p - 1.0)
               * inner.quadrature_error if inner.value > 0 else 0.0)
    quad_err = rhs.quadrature_error + est.value * lhs_err
    extra_tol = est.bracket_width * lhs
    return _report("ckn", {"a": a, "b": b, "p": p}, m, _tag(u), est.value,
                   lhs, rhs.value, quad_err, extra_tol=extra_tol,
                   extra={"gamma": ck.gamma(n), "s_eff": ck.s_eff(n)})


def ckn_ibp_check(w_profile: RadialProfile, m: ModelManifold,
                  a: float = 0.2, rel_tol: float = 1e-6) -> InequalityReport:
    """Integration-by-parts identity behind the CKN proof:

    int |D(w r^a)|^2 / r^{2a} = int |Dw|^2 + int a(a+1-r Laplacian r) w^2/r^2.

    Both sides evaluated independently; mismatch reported as the deficit.
    """
    samples = np.abs(w_profile.values)
    nz = np.nonzero(samples > 1e-14 * max(samples.max(), 1e-300))[0]
    if nz.size and w_profile.grid.nodes[nz[0]] < 1e-3 * w_profile.grid.r_max:
        raise ParameterError(
            "ckn_ibp_check requires support away from the pole")

    from .radial import integrate

    def lhs_density(r):
        # D(w r^a) = r^a (w' + a w / r); the r^{2a} factors cancel
        return (w_profile.deriv(r) + a * w_profile(r) / r) ** 2

    def grad_density(r):
        return w_profile.deriv(r) ** 2

    def curv_density(r):
        lap = m.laplacian_r(r, allow_beyond=True)
        return a * (a + 1.0 - r * lap) * (w_profile(r) / r) ** 2

    breaks = w_profile.breakpoints
    lhs, e1 = integrate(m, lhs_density, breakpoints=breaks)
    r1, e2 = integrate(m, grad_density, breakpoints=breaks)
    r2, e3 = integrate(m, curv_density, breakpoints=breaks)
    rhs = r1 + r2
    scale = max(abs(lhs), abs(rhs))
    tol = rel_tol * scale + ERROR_FACTOR * (e1 + e2 + e3)
    deficit = rhs - lhs
    extra = {"relative_mismatch": abs(deficit) / scale if scale else 0.0}
    if m.is_euclidean:
        # r Laplacian r = n-1 exactly, so the curvature term collapses to
        # a(a+2-n) int w^2/r^2; recompute it that way as a cross-check
        cf, _ = integrate(m, lambda r: (w_profile(r) / r) ** 2,
                          breakpoints=breaks)
        cf *= a * (a + 2.0 - m.n)
        extra["closed_form_term"] = cf
        extra["closed_form_rel_mismatch"] = \
            abs(r2 - cf) / max(abs(cf), 1e-300)
    return InequalityReport(
        name="ckn_ibp", params={"a": a}, manifold=_label(m),
        profile=_tag(w_profile), constant=1.0, lhs=lhs, rhs=rhs,
        deficit=deficit, tolerance=tol,
        passed=bool(abs(deficit) <= tol), theta=m.avr(), n=m.n,
        extra=extra,
    )


def bishop_gromov_check(m: ModelManifold, radii=None,
                        tol: float = 1e-9) -> InequalityReport:
    """V(r)/(omega_n r^n) nonincreasing and <= 1 across ``radii``."""
    if radii is None:
        radii = np.geomspace(1e-3 * m.r_max, m.r_max, 200)
    radii = np.asarray(radii, dtype=float)
    ratios = np.asarray(m.volume_ratio(radii), dtype=float)
    drops = np.diff(ratios)
    worst_increase = float(np.max(drops)) if drops.size else 0.0
    over_one = float(np.max(ratios) - 1.0)
    deficit = -max(worst_increase, over_one)
    passed = bool(worst_increase <= tol and over_one <= tol)
    return InequalityReport(
        name="bishop_gromov", params={}, manifold=_label(m), profile="-",
        constant=1.0, lhs=float(ratios[-1]), rhs=float(ratios[0]),
        deficit=deficit, tolerance=tol, passed=passed, theta=m.avr(), n=m.n,
        extra={"worst_increase": worst_increase, "max_ratio": float(np.max(ratios))},
    )
