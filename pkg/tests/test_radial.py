"""Profile families and the weighted radial quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radineq import ModelManifold, ProfileFamily, RadialGrid, materialize
from radineq.errors import ConfigError, IntegrabilityError
from radineq.radial import integrate, load_profile, save_profile

from conftest import trapezoid_volume_integral


def test_gaussian_values(gaussian3):
    # cutoff starts at 0.75*sqrt(80) ~ 6.7, so small radii are pure gaussian
    r = np.array([0.0, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(gaussian3(r), np.exp(-r * r), rtol=1e-14)
    np.testing.assert_allclose(gaussian3.deriv(np.array([1.0])),
                               [-2.0 * math.exp(-1.0)], rtol=1e-14)


def test_bump_values(bump3):
    r = np.array([0.0, 0.5, 0.9, 1.0, 1.5])
    expected = np.clip(1.0 - r ** 2, 0.0, None) ** 2
    np.testing.assert_allclose(bump3(r), expected, rtol=1e-14, atol=1e-300)
    assert bump3(np.array([2.0]))[0] == 0.0
    assert bump3.support_radius == 1.0


def test_two_bump_peaks(two_bump_cone):
    # default peaks: h1 = 1 at r = 1.5, h2 = 0.6 at r = 4
    assert two_bump_cone(np.array([1.5]))[0] == pytest.approx(1.0, rel=1e-12)
    assert two_bump_cone(np.array([4.0]))[0] == pytest.approx(0.6, rel=1e-12)
    assert not two_bump_cone.is_nonincreasing()


def test_hardy_family_power_law_middle():
    fam = ProfileFamily("hardy_near_extremal", {"beta": 0.5, "eps": 0.05})
    m = ModelManifold.euclidean(3, r_max=50.0)
    u = materialize(fam, m)
    # on the middle fifth of the log-range the profile is exactly r^-beta
    assert u(np.array([1.0]))[0] == pytest.approx(1.0, rel=1e-12)
    r = np.array([0.8, 1.0, 1.25])
    np.testing.assert_allclose(u(r), r ** -0.5, rtol=1e-12)
    # vanishes outside [eps, 1/eps]
    assert u(np.array([0.04]))[0] == 0.0
    assert u(np.array([21.0]))[0] == 0.0
    assert len(u.breakpoints) == 4


def test_annulus_breakpoints():
    m = ModelManifold.euclidean(3)
    u = materialize(ProfileFamily("annulus", {"a": 1.5, "w": 0.5}), m)
    assert u.breakpoints == (1.0, 2.0)
    assert u(np.array([1.5]))[0] == pytest.approx(1.0)
    assert u(np.array([0.9]))[0] == 0.0


def test_integrate_gaussian_closed_form(euclid3):
    val, err = integrate(euclid3, lambda r: np.exp(-r * r))
    assert val == pytest.approx(math.pi ** 1.5, rel=1e-9)
    assert err < 1e-8 * val


def test_integrate_unit_ball(euclid3):
    val, _ = integrate(euclid3, lambda r: np.ones_like(r), r_max=1.0)
    assert val == pytest.approx(4.0 * math.pi / 3.0, rel=1e-10)


def test_integrate_cone_vs_trapezoid(cone_half):
    def f(r):
        return np.exp(-0.5 * r)

    ref = trapezoid_volume_integral(cone_half, f, 0.0, 50.0, n_pts=400001)
    val, _ = integrate(cone_half, f)
    assert val == pytest.approx(ref, rel=1e-8)


def test_integrate_singular_weight(euclid3):
    # int_{B_1} r^-2 dV = 4 pi in R^3
    val, _ = integrate(euclid3, lambda r: r ** -2.0, r_max=1.0,
                       origin_exponent=2.0)
    assert val == pytest.approx(4.0 * math.pi, rel=1e-9)


def test_integrate_divergent_raises(euclid3):
    with pytest.raises(IntegrabilityError):
        integrate(euclid3, lambda r: r ** -3.0, origin_exponent=3.0)


def test_breakpoints_sharpen_kinked_integrand(euclid3, bump3):
    # |u| has a C^1 kink at the support edge; panels straddling it lose
    # accuracy unless the edge is declared
    exact = 32.0 * math.pi / 105.0
    plain, _ = integrate(euclid3, lambda r: np.abs(bump3(r)))
    split, _ = integrate(euclid3, lambda r: np.abs(bump3(r)),
                         breakpoints=bump3.breakpoints)
    assert abs(split - exact) <= 1e-12 * exact
    assert abs(split - exact) < abs(plain - exact)


def test_materialize_support_guard():
    m = ModelManifold.euclidean(3, r_max=10.0)
    with pytest.raises(ConfigError):
        materialize(ProfileFamily("bump", {"R": 8.0, "k": 2.0}), m)
    with pytest.raises(ConfigError):
        materialize(ProfileFamily("nonsense", {}), m)
    with pytest.raises(ConfigError):
        materialize(ProfileFamily("bump", {"R": 1.0, "k": 1.0}), m)


def test_save_load_round_trip(tmp_path, bump3):
    path = tmp_path / "bump.dat"
    save_profile(bump3, path)
    back = load_profile(path)
    np.testing.assert_allclose(back.values, bump3.values, rtol=1e-12)
    np.testing.assert_allclose(back.grid.nodes, bump3.grid.nodes, rtol=1e-12)
    r = np.linspace(0.05, 0.95, 50)
    np.testing.assert_allclose(back(r), bump3(r), atol=2e-5)


def test_radial_grid_validation():
    from radineq.errors import DomainError
    with pytest.raises(DomainError):
        RadialGrid(np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        RadialGrid(np.array([1.0, 1.0, 2.0]))


@given(a=st.floats(0.1, 3.0), b=st.floats(0.1, 3.0))
@settings(max_examples=40, deadline=None)
def test_integrate_linearity(a, b):
    m = ModelManifold.euclidean(3, r_max=10.0)
    f = lambda r: np.exp(-r)
    g = lambda r: 1.0 / (1.0 + r * r)
    lhs, _ = integrate(m, lambda r: a * f(r) + b * g(r))
    vf, _ = integrate(m, f)
    vg, _ = integrate(m, g)
    assert lhs == pytest.approx(a * vf + b * vg, rel=1e-12)


@given(k=st.floats(2.0, 5.0), R=st.floats(0.5, 5.0))
@settings(max_examples=40, deadline=None)
def test_bump_integral_closed_form(k, R):
    """int_{R^3} (1 - (r/R)^2)^k dV = 4 pi R^3 B(3/2, k+1) / 2."""
    m = ModelManifold.euclidean(3, r_max=20.0)
    u = materialize(ProfileFamily("bump", {"R": R, "k": k}), m)
    val, _ = integrate(m, lambda r: u(r), breakpoints=u.breakpoints)
    exact = 2.0 * math.pi * R ** 3 * math.gamma(1.5) * math.gamma(k + 1) \
        / math.gamma(k + 2.5)
    assert val == pytest.approx(exact, rel=1e-9)
