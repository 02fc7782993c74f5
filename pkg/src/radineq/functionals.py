"""Integral functionals: L^p norms, gradient energies, weighted norms.

For radial u on a warped product, |Du| = |u'(r)| exactly, so every
functional is a one-dimensional weighted integral handled by
``radial.integrate``.  Each result carries a quadrature error estimate;
inequality tolerances are built from these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, IntegrabilityError, ParameterError
from .manifold import ModelManifold
from .radial import RadialProfile, integrate

__all__ = [
    "FunctionalValue",
    "WeightSpec",
    "lp_norm",
    "lp_energy",
    "gradient_energy",
    "grad_lp",
    "weighted_lp",
    "rayleigh_quotient",
]


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    quadrature_error: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class WeightSpec:
    """Radial weight r^exponent (``power``) or 1 (``constant``)."""

    form: str = "constant"
    exponent: float = 0.0

    def __post_init__(self) -> None:
        if self.form not in ("power", "constant"):
            raise ParameterError(f"unknown weight form {self.form!r}")

    @classmethod
    def power(cls, exponent: float) -> "WeightSpec":
        return cls(form="power", exponent=exponent)

    @property
    def effective_exponent(self) -> float:
        return self.exponent if self.form == "power" else 0.0

    @property
    def monotonicity(self) -> str:
        e = self.effective_exponent
        if e == 0.0:
            return "constant"
        return "nonincreasing" if e < 0 else "increasing"

    def __call__(self, r):
        if self.form == "constant" or self.exponent == 0.0:
            return np.ones_like(np.asarray(r, dtype=float))
        return np.asarray(r, dtype=float) ** self.exponent


def lp_energy(u: RadialProfile, m: ModelManifold, p: float) -> FunctionalValue:
    """integral_M |u|^p dV."""
    if p < 1:
        raise ParameterError(f"p={p} must be >= 1")
    val, err = integrate(m, lambda r: np.abs(u(r)) ** p,
                         breakpoints=u.breakpoints)
    return FunctionalValue(val, err)


def lp_norm(u: RadialProfile, m: ModelManifold, p: float) -> FunctionalValue:
    """||u||_{L^p(M)}."""
    e = lp_energy(u, m, p)
    if e.value <= 0.0:
        return FunctionalValue(0.0, e.quadrature_error)
    norm = e.value ** (1.0 / p)
    return FunctionalValue(norm, e.quadrature_error * norm / (p * e.value))


def gradient_energy(u: RadialProfile, m: ModelManifold, p: float,
                    weight: WeightSpec | None = None) -> FunctionalValue:
    """integral_M |Du|^p w(r) dV (w defaults to 1)."""
    if p <= 1:
        raise ParameterError(f"p={p} must be > 1 for gradient energies")
    w = weight if weight is not None else WeightSpec()
    e = w.effective_exponent
    if e <= -m.n:
        raise IntegrabilityError(f"gradient weight exponent {e} <= -n")
    val, err = integrate(m, lambda r: np.abs(u.deriv(r)) ** p * w(r),
                         origin_exponent=max(0.0, -e),
                         breakpoints=u.breakpoints)
    return FunctionalValue(val, err)


def grad_lp(u: RadialProfile, m: ModelManifold, p: float) -> FunctionalValue:
    """||Du||_{L^p(M)}."""
    e = gradient_energy(u, m, p)
    if e.value <= 0.0:
        return FunctionalValue(0.0, e.quadrature_error)
    norm = e.value ** (1.0 / p)
    return FunctionalValue(norm, e.quadrature_error * norm / (p * e.value))


def weighted_lp(u: RadialProfile, m: ModelManifold, w: WeightSpec,
                p: float) -> FunctionalValue:
    """integral_M |u|^p w(r) dV (the plain integral, not a norm)."""
    if p < 1:
        raise ParameterError(f"p={p} must be >= 1")
    e = w.effective_exponent
    if e <= -m.n:
        raise IntegrabilityError(
            f"weight exponent {e} <= -n = {-m.n}: divergent for bounded profiles")
    val, err = integrate(m, lambda r: np.abs(u(r)) ** p * w(r),
                         origin_exponent=max(0.0, -e),
                         breakpoints=u.breakpoints)
    return FunctionalValue(val, err)


def rayleigh_quotient(u: RadialProfile, m: ModelManifold, name: str,
                      **params) -> float:
    """Ratio whose infimum over test functions is the sharp constant.

    Supported quotients:
      * hardy(p):           int |Du|^p / int |u|^p r^-p
      * hpw:                (int r^2 u^2)(int |Du|^2) / (int u^2)^2
      * hardy_sobolev(p,s): int |Du|^p / (int |u|^{p(n-s)/(n-p)} r^-s)^{(n-p)/(n-s)}
      * ckn(a,b):           int r^-2a |Du|^2 / (int r^-bp |u|^p)^{2/p}
    """
    n = m.n
    if name == "hardy":
        p = params["p"]
        num = gradient_energy(u, m, p).value
        den = weighted_lp(u, m, WeightSpec.power(-p), p).value
    elif name == "hpw":
        num = weighted_lp(u, m, WeightSpec.power(2.0), 2.0).value \
            * gradient_energy(u, m, 2.0).value
        den = lp_energy(u, m, 2.0).value ** 2
    elif name == "hardy_sobolev":
        p, s = params["p"], params["s"]
        q = p * (n - s) / (n - p)
        num = gradient_energy(u, m, p).value
        den = weighted_lp(u, m, WeightSpec.power(-s), q).value ** ((n - p) / (n - s))
    elif name == "ckn":
        a, b = params["a"], params["b"]
        p = 2.0 * n / (n - 2.0 + 2.0 * (b - a))
        num = gradient_energy(u, m, 2.0, weight=WeightSpec.power(-2.0 * a)).value
        den = weighted_lp(u, m, WeightSpec.power(-b * p), p).value ** (2.0 / p)
    else:
        raise ParameterError(f"unknown quotient {name!r}")
    if den <= 0.0:
        raise DegenerateInputError(f"{name} quotient denominator vanished")
    return num / den
