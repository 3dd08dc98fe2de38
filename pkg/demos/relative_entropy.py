"""
Relative entropy of entanglement
================================

Minimizing the relative entropy from the state to the separable set puts
weight 1/2 on the dominant Bell label.  The value only depends on the
concurrence c: -log2(1 - c^2) / 2.
"""

import numpy as np

from bdconvex import bd_from_probs, ree_bd
from bdconvex.relent import bd_entropy_problem, kkt_report, min_relative_entropy, ree_profile

rho = bd_from_probs([0.7, 0.1, 0.1, 0.1])
r = ree_bd(rho)
print("REE (bits)", r.value, "closest state", r.closest_state.p)

# same answer from the constrained minimizer (dual Newton)
prob = bd_entropy_problem(rho, 0.5)
w, y, value = min_relative_entropy(prob)
print("Newton", value, w)
print("KKT holds", kkt_report(prob, w, y).ok)

# fixing the dominant weight to b1 shows why 1/2 is the best choice
for b1 in np.linspace(0.1, 0.5, 5):
    print(f"b1={b1:.1f}  I={ree_profile(rho, b1):.5f}")
