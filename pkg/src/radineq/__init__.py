"""radineq: numerical verification of sharp functional inequalities
(Hardy, Heisenberg-Pauli-Weyl, Hardy-Sobolev, Caffarelli-Kohn-Nirenberg,
Polya-Szego) on rotationally symmetric model manifolds with nonnegative
Ricci curvature and Euclidean volume growth."""

from ._kernels import BACKEND as kernel_backend
from .manifold import ModelManifold, WarpFunction, unit_ball_volume
from .radial import ProfileFamily, RadialGrid, RadialProfile, materialize
from .rearrange import distribution, euclidean_counterpart, rearrange
from .functionals import WeightSpec, grad_lp, lp_norm, rayleigh_quotient, \
    weighted_lp
from .constants import estimate_chs, hardy_constant, hpw_constant, \
    sobolev_constant
from .inequalities import CknParams, HsParams, InequalityReport

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "ModelManifold",
    "WarpFunction",
    "unit_ball_volume",
    "ProfileFamily",
    "RadialGrid",
    "RadialProfile",
    "materialize",
    "distribution",
    "euclidean_counterpart",
    "rearrange",
    "WeightSpec",
    "grad_lp",
    "lp_norm",
    "rayleigh_quotient",
    "weighted_lp",
    "estimate_chs",
    "hardy_constant",
    "hpw_constant",
    "sobolev_constant",
    "CknParams",
    "HsParams",
    "InequalityReport",
    "__version__",
]
