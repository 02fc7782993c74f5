import numpy as np
import pytest

from radineq import ModelManifold, ProfileFamily, materialize


@pytest.fixture(scope="session")
def euclid3():
    return ModelManifold.euclidean(3)


@pytest.fixture(scope="session")
def euclid4():
    return ModelManifold.euclidean(4)


@pytest.fixture(scope="session")
def cone_half():
    return ModelManifold.smoothed_cone(3, 0.5, 1.0)


@pytest.fixture(scope="session")
def cone_08():
    return ModelManifold.smoothed_cone(3, 0.8, 1.0)


@pytest.fixture(scope="session")
def gaussian3(euclid3):
    return materialize(ProfileFamily("gaussian", {"alpha": 1.0}), euclid3)


@pytest.fixture(scope="session")
def bump3(euclid3):
    return materialize(ProfileFamily("bump", {"R": 1.0, "k": 2.0}), euclid3)


@pytest.fixture(scope="session")
def two_bump_cone(cone_half):
    return materialize(ProfileFamily("two_bump", {}), cone_half)


def trapezoid_volume_integral(m, f, r_lo, r_hi, n_pts=200001):
    """Brute-force fixed-grid trapezoid oracle for volume integrals."""
    r = np.linspace(r_lo, r_hi, n_pts)
    phi, _, _ = m.warp.eval(r)
    vals = np.asarray(f(r), dtype=float) * phi ** (m.n - 1)
    return m.volume_coeff * np.trapezoid(vals, r)
