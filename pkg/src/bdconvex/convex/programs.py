"""The decomposition problem for Bell-diagonal states as an SDP and an LP."""

from typing import Tuple

import numpy as np

from bdconvex.bdstate import BDState, bd_from_probs, classify
from bdconvex.convex.lp import solve_lp
from bdconvex.convex.sdp import SDPProblem
from bdconvex.errors import NotEntangledError, NotSeparableError


def lsd_as_sdp(rho: BDState, sigma: BDState) -> SDPProblem:
    """Largest weight of ``sigma`` inside ``rho`` as a one-variable SDP.

    minimize ``-lambda`` subject to ``rho - lambda * sigma >= 0``, written in
    the Bell basis where both matrices are diagonal.  Labels on which both
    states vanish are left out, so the matrices can be smaller than 4x4.

    Raises
    ------
    NotEntangledError
        ``rho`` is separable.
    NotSeparableError
        ``sigma`` is entangled.
    """
    if not classify(rho).is_entangled:
        raise NotEntangledError(f"rho = {rho.p.tolist()} is separable")
    if not classify(sigma).is_separable:
        raise NotSeparableError(f"sigma = {sigma.p.tolist()} is entangled")
    # Bell labels where both weights vanish only contribute 0 >= 0; keeping
    # them would leave the LMI without a strictly feasible point
    keep = (rho.p > 0.0) | (sigma.p > 0.0)
    return SDPProblem(c=[-1.0], F0=np.diag(rho.p[keep]), Fi=[-np.diag(sigma.p[keep])])


def lsd_standard_form(rho: BDState):
    """``(c, A, b)`` of the LP over unnormalized separable weights ``q``.

    Variables are ``(q, u, s)``, each of length 4:

        q + u = p                      (q <= p)
        sum(q) - 2 q_i - s_i = 0       (q_i <= sum(q) / 2)

    and the objective is ``min -sum(q)``.
    """
    p = rho.p
    A = np.zeros((8, 12))
    b = np.zeros(8)
    for i in range(4):
        A[i, i] = 1.0
        A[i, 4 + i] = 1.0
        b[i] = p[i]
        A[4 + i, :4] = 1.0
        A[4 + i, i] -= 2.0
        A[4 + i, 8 + i] = -1.0
    c = np.zeros(12)
    c[:4] = -1.0
    return c, A, b


def lsd_lp_over_separable(rho: BDState) -> Tuple[float, BDState]:
    """Best weight over every separable Bell-diagonal candidate at once.

    With ``q = lambda * sigma`` the constraint ``rho - lambda sigma >= 0``
    becomes ``q <= p`` and separability of ``sigma`` becomes
    ``2 q_i <= sum(q)``, so the optimum is a linear program.

    Returns
    -------
    lam : float
    sigma : BDState
        ``q / lam``; the uniform state when ``lam`` is zero.

    Raises
    ------
    NotEntangledError
    """
    if not classify(rho).is_entangled:
        raise NotEntangledError(f"rho = {rho.p.tolist()} is separable")
    res = solve_lp(*lsd_standard_form(rho))
    q = res.x[:4]
    lam = float(q.sum())
    if lam <= 0.0:
        return 0.0, bd_from_probs(np.full(4, 0.25))
    return lam, bd_from_probs(q / lam)
