"""
Solver certificates
===================

The decomposition weight for a fixed separable candidate is a one-variable
semidefinite program, and the search over all candidates is a linear
program.  Both solvers return dual information that certifies optimality.
"""

import numpy as np

from bdconvex import bd_from_probs, optimal_lsd
from bdconvex.convex import (
    check_slackness,
    duality_gap,
    lsd_as_sdp,
    lsd_lp_over_separable,
    solve_sdp,
)

rho = bd_from_probs([0.9, 0.05, 0.03, 0.02])
sigma = optimal_lsd(rho).separable

prob = lsd_as_sdp(rho, sigma)
sol = solve_sdp(prob)
print("SDP lambda", sol.x[0], sol.status)
print("duality gap", duality_gap(prob, sol.x, sol.Z))
print("slackness ok", check_slackness(prob.F(sol.x), sol.Z, 1e-6))

# barrier path: primal and dual objectives close in from both sides
for t, primal, dual in sol.history[:: max(1, len(sol.history) // 5)]:
    print(f"t={t:9.3g}  primal={primal:.10f}  dual={dual:.10f}")

lam, best = lsd_lp_over_separable(rho)
print("LP lambda", lam, "best separable", np.round(best.p, 12))
