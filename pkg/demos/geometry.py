"""
Bell-diagonal states and the separable octahedron
=================================================

A Bell-diagonal state is a probability vector over the four Bell states.
Its correlation vector t lives in a tetrahedron, and the separable states
fill the octahedron |t1| + |t2| + |t3| <= 1 inside it.
"""

import numpy as np

from bdconvex import bd_from_probs, classify, concurrence, density_matrix, probs_to_tvec
from bdconvex.bdstate import (
    P_TO_T,
    bell_diagonal,
    ppt_min_eigenvalue,
    separable_by_l1,
    separable_by_weights,
)

# a state with most weight on phi+
rho = bd_from_probs([0.7, 0.1, 0.1, 0.1])
print(probs_to_tvec(rho))
print(classify(rho), "concurrence", concurrence(rho))

# computational basis: phi+ couples |00> and |11>
print(np.round(density_matrix(rho).real, 3))
# Bell basis: diagonal, with the weights on the diagonal
print(bell_diagonal(density_matrix(rho)))

# PPT test: the partial transpose has smallest eigenvalue 1/2 - max p
print("PPT min eigenvalue", ppt_min_eigenvalue(density_matrix(rho)))

# the weight test and the l1 test describe the same octahedron
W = np.random.default_rng(0).dirichlet(np.ones(4), size=10000)
inside = separable_by_weights(W)
print("fraction separable", inside.mean())
print("tests agree", np.array_equal(inside, separable_by_l1(W @ P_TO_T.T)))
