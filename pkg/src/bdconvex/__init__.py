"""Convex optimization tools for Bell-diagonal two-qubit states.

Modules
-------
bdstate   states, correlation vectors, separability geometry
convex    SDP and LP solvers, duality and KKT certificates
lsd       optimal Lewenstein-Sanpera decomposition
relent    relative entropy and its constrained minimization
oracle    brute-force lattice scans
cli       command-line interface
"""

from bdconvex.bdstate import (
    BDState,
    Region,
    RegionClass,
    TVector,
    bd_from_probs,
    classify,
    concurrence,
    density_matrix,
    ppt_min_eigenvalue,
    probs_to_tvec,
    tvec_to_probs,
)
from bdconvex.lsd import LSDecomposition, lambda_for_candidate, optimal_lsd, residual_check
from bdconvex.relent import REEResult, min_relative_entropy, ree_bd, ree_profile, relative_entropy

__version__ = "0.1.0"

__all__ = [
    "BDState",
    "LSDecomposition",
    "REEResult",
    "Region",
    "RegionClass",
    "TVector",
    "bd_from_probs",
    "classify",
    "concurrence",
    "density_matrix",
    "lambda_for_candidate",
    "min_relative_entropy",
    "optimal_lsd",
    "ppt_min_eigenvalue",
    "probs_to_tvec",
    "ree_bd",
    "ree_profile",
    "relative_entropy",
    "residual_check",
    "tvec_to_probs",
]
