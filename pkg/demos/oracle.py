"""
Brute-force check on a lattice
==============================

The closed forms can be checked without any calculus: scan separable
states on a fine lattice and keep the best one.
"""

from bdconvex import bd_from_probs, optimal_lsd, ree_bd
from bdconvex.oracle import grid_max_lambda, grid_min_ree

rho = bd_from_probs([0.7, 0.1, 0.1, 0.1])
for step in (1e-2, 5e-3, 1e-3):
    g = grid_min_ree(rho, step)
    h = grid_max_lambda(rho, step)
    print(f"step={step:g}  REE {g.value:.6f} at {g.point.p.round(4)}  lambda {h.value:.4f}"
          f"  ({g.points_evaluated} points)")

print("closed forms: REE", ree_bd(rho).value, "lambda", optimal_lsd(rho).lam)
