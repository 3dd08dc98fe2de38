"""Small dense SDP and LP solvers with optimality certificates."""

from bdconvex.convex.io import problem_from_json, problem_to_json
from bdconvex.convex.kkt import KKTReport, check_kkt
from bdconvex.convex.lp import LPResult, lp_residuals, solve_lp, vertices
from bdconvex.convex.programs import lsd_as_sdp, lsd_lp_over_separable, lsd_standard_form
from bdconvex.convex.sdp import (
    SDPProblem,
    SDPSolution,
    Status,
    check_slackness,
    check_solution,
    duality_gap,
    solve_sdp,
)

__all__ = [
    "KKTReport",
    "LPResult",
    "SDPProblem",
    "SDPSolution",
    "Status",
    "check_kkt",
    "check_slackness",
    "check_solution",
    "duality_gap",
    "lp_residuals",
    "lsd_as_sdp",
    "lsd_lp_over_separable",
    "lsd_standard_form",
    "problem_from_json",
    "problem_to_json",
    "solve_lp",
    "solve_sdp",
    "vertices",
]
