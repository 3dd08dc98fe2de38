"""Standard-form linear programs through the SDP barrier.

    minimize c.x  subject to  A x = b,  x >= 0

Writing ``x = x0 + N z`` with N spanning the null space of A turns the
problem into a diagonal SDP in z.  The barrier solution is then crossed
over to an optimal basic solution, so that the returned multipliers are
the exact basic ones; exhaustive enumeration of bases covers problems
without a strictly feasible point.
"""

import itertools
from typing import NamedTuple

import numpy as np

from bdconvex.convex.sdp import MAX_BLOCK, MAX_VARIABLES, SDPProblem, solve_sdp
from bdconvex.errors import (
    DimensionMismatchError,
    InfeasibleError,
    MaxIterationsError,
    UnboundedError,
)

LP_TOL = 1e-9
STRICT_TOL = 1e-9
RANK_TOL = 1e-10
BARRIER_TOL = 1e-4


class LPResult(NamedTuple):
    """Optimal x with multipliers satisfying ``A^T zeta + y = c``."""

    x: np.ndarray
    zeta: np.ndarray
    y: np.ndarray
    strictly_complementary: bool


def _independent_rows(A):
    if np.linalg.matrix_rank(A, tol=RANK_TOL) == A.shape[0]:
        return list(range(A.shape[0]))
    rows = []
    for i in range(A.shape[0]):
        trial = rows + [i]
        if np.linalg.matrix_rank(A[trial], tol=RANK_TOL) == len(trial):
            rows = trial
    return rows


def _basic_solution(A, b, c, basis):
    """Basic solution and multipliers for ``basis``, or None if singular."""
    B = A[:, basis]
    n = A.shape[1]
    x = np.zeros(n)
    if basis:
        try:
            x[list(basis)] = np.linalg.solve(B, b)
            zeta = np.linalg.solve(B.T, c[list(basis)])
        except np.linalg.LinAlgError:
            return None
        if np.linalg.cond(B) > 1e12:
            return None
    else:
        zeta = np.zeros(A.shape[0])
    y = c - A.T @ zeta
    return x, zeta, y


def _clean(v):
    return np.where(np.abs(v) < 1e-13, 0.0, v)


def _greedy_basis(A, order):
    basis = []
    for j in order:
        trial = basis + [int(j)]
        if np.linalg.matrix_rank(A[:, trial], tol=RANK_TOL) == len(trial):
            basis = trial
        if len(basis) == A.shape[0]:
            break
    return sorted(basis)


def _enumerate(A, b, c):
    """Lexicographically first optimal basis, by exhaustive search."""
    k, n = A.shape
    feasible = None
    best = None
    for basis in itertools.combinations(range(n), k):
        sol = _basic_solution(A, b, c, list(basis))
        if sol is None:
            continue
        x, zeta, y = sol
        if np.min(x, initial=0.0) < -LP_TOL:
            continue
        feasible = sol
        if np.min(y, initial=0.0) >= -LP_TOL:
            best = sol
            break
    if best is not None:
        return best
    if feasible is None:
        raise InfeasibleError("no basic feasible solution")
    raise UnboundedError("feasible but no basis is dual feasible")


def vertices(A, b):
    """All basic feasible solutions of ``{A x = b, x >= 0}`` (brute force)."""
    A, b = np.asarray(A, float), np.asarray(b, float)
    rows = _independent_rows(A)
    A, b = A[rows], b[rows]
    k, n = A.shape
    out = []
    for basis in itertools.combinations(range(n), k):
        sol = _basic_solution(A, b, np.zeros(n), list(basis))
        if sol is not None and np.min(sol[0], initial=0.0) >= -LP_TOL:
            if not any(np.allclose(sol[0], v, atol=1e-12) for v in out):
                out.append(sol[0])
    return out


def _barrier_point(A, b, c):
    """Approximate analytic-centre optimum via the diagonal SDP, or None."""
    x0 = np.linalg.lstsq(A, b, rcond=None)[0] if A.size else np.zeros(A.shape[1])
    if A.shape[0]:
        _, sv, vt = np.linalg.svd(A)
        rank = int(np.sum(sv > RANK_TOL))
        N = vt[rank:].T
    else:
        N = np.eye(A.shape[1])
    if N.shape[1] == 0:
        return x0
    if N.shape[1] > MAX_VARIABLES or A.shape[1] > MAX_BLOCK:
        return None
    prob = SDPProblem(c=N.T @ c, F0=np.diag(x0), Fi=[np.diag(col) for col in N.T])
    try:
        sol = solve_sdp(prob, tol=BARRIER_TOL)
    except (InfeasibleError, MaxIterationsError):
        return None
    return x0 + N @ sol.x


def solve_lp(c, A, b) -> LPResult:
    """Solve ``min c.x`` over ``{A x = b, x >= 0}``.

    Returns an optimal basic solution ``x`` with multipliers ``zeta`` (for
    ``A x = b``) and ``y`` (for ``x >= 0``) such that ``A^T zeta + y = c``,
    ``y >= 0`` and ``x_i y_i = 0``.  ``strictly_complementary`` is true when
    ``x_i + y_i > 1e-9`` for every i.

    Redundant equality rows are dropped; the corresponding entries of
    ``zeta`` are zero.

    Raises
    ------
    InfeasibleError, UnboundedError
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    A = np.asarray(A, dtype=float).reshape(-1, n)
    b = np.asarray(b, dtype=float).ravel()
    if A.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {A.shape[0]} rows but b has {b.size} entries")

    rows = _independent_rows(A)
    Ar, br = A[rows], b[rows]
    if A.shape[0] and np.max(np.abs(A @ np.linalg.lstsq(Ar, br, rcond=None)[0] - b)) > LP_TOL:
        raise InfeasibleError("equality constraints are inconsistent")

    sol = None
    xbar = _barrier_point(Ar, br, c)
    if xbar is not None:
        order = sorted(range(n), key=lambda j: (-round(xbar[j], 9), j))
        cand = _basic_solution(Ar, br, c, _greedy_basis(Ar, order))
        if (cand is not None and np.min(cand[0], initial=0.0) >= -LP_TOL
                and np.min(cand[2], initial=0.0) >= -LP_TOL):
            sol = cand
    if sol is None:
        sol = _enumerate(Ar, br, c)

    x, zeta_r, y = (_clean(v) for v in sol)
    x = np.maximum(x, 0.0)
    zeta = np.zeros(A.shape[0])
    zeta[rows] = zeta_r
    strict = bool(np.all(x + y > STRICT_TOL))
    return LPResult(x, zeta, y, strict)


def lp_residuals(c, A, b, x, zeta, y) -> dict:
    """Largest violation of each optimality condition of the LP.

    Keys: ``dual_equality`` (A^T zeta + y = c), ``primal_equality``
    (A x = b), ``primal_sign`` (x >= 0), ``dual_sign`` (y >= 0) and
    ``complementarity`` (x_i y_i = 0).
    """
    c = np.asarray(c, float).ravel()
    A = np.asarray(A, float).reshape(-1, c.size)
    b = np.asarray(b, float).ravel()
    x, zeta, y = (np.asarray(v, float) for v in (x, zeta, y))

    def worst(v):
        return float(np.max(np.abs(v), initial=0.0))

    return {
        "dual_equality": worst(A.T @ zeta + y - c),
        "primal_equality": worst(A @ x - b),
        "primal_sign": max(0.0, -float(np.min(x, initial=0.0))),
        "dual_sign": max(0.0, -float(np.min(y, initial=0.0))),
        "complementarity": worst(x * y),
    }
