"""
Best separable approximation
============================

Any entangled Bell-diagonal state splits as lam * sigma + (1 - lam) * pure,
with sigma separable.  The largest weight is lam = 2 (1 - p_max), and what
is left over is the dominant Bell state itself.
"""

import numpy as np

from bdconvex import bd_from_probs, optimal_lsd
from bdconvex.lsd import lambda_for_candidate, residual_spectrum

rho = bd_from_probs([0.7, 0.1, 0.1, 0.1])
d = optimal_lsd(rho)
print("lambda", d.lam)
print("separable part", d.separable.p)
print("pure part: Bell state", d.entangled_index, "with weight", d.entangled_weight)

# residual (rho - lam sigma) / (1 - lam) is a pure state
print("residual spectrum", np.round(residual_spectrum(rho, d), 12))

# any other separable candidate does worse
for q1 in (0.3, 0.4, 0.5):
    sigma = bd_from_probs([q1, *[(1 - q1) / 3] * 3])
    print(f"candidate q1={q1}: lambda = {lambda_for_candidate(rho, sigma):.4f}")
