"""Primal barrier method for small semidefinite programs.

Primal:  minimize  c.x   subject to  F(x) = F0 + sum_i x_i F_i  >= 0
Dual:    maximize  -Tr[F0 Z]  subject to  Z >= 0,  Tr[F_i Z] = c_i

Each centering step minimizes ``t c.x - log det F(x)`` with damped Newton.
At the exact central point ``Z = F(x)^{-1} / t`` is dual feasible with gap
``m / t``; off-center the Newton-corrected
``Z = (F^{-1} - F^{-1} dF F^{-1}) / t``, with ``dF = sum_i dx_i F_i``, meets
``Tr[F_i Z] = c_i`` exactly and stays positive semidefinite once the
decrement is below 1.  A phase-I problem (minimize s with F(x) + sI >= 0)
provides a strictly feasible start when ``F0`` is not positive definite.
"""

import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from bdconvex.errors import (
    DimensionMismatchError,
    InfeasibleError,
    MaxIterationsError,
    NotFeasibleError,
    UnboundedError,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
MAX_NEWTON_STEPS = 200
MAX_VARIABLES = 8
MAX_BLOCK = 16
HERMITIAN_TOL = 1e-14
BARRIER_GROWTH = 10.0
DIVERGENCE_NORM = 1e12
PHASE_ONE_BOX = 1e6
# Newton decrement^2 / 2 thresholds: intermediate and final centering
CENTERING_TOL = 1e-2
FINAL_CENTERING_TOL = 1e-12

FEASIBILITY_TOL = 1e-9
DUAL_EQUALITY_TOL = 1e-8
GAP_AGREEMENT_TOL = 1e-10


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    MAX_ITERATIONS = "max_iterations"


def _hermitian_deviation(a):
    return float(np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2))), initial=0.0))


@dataclass(frozen=True, eq=False)
class SDPProblem:
    """``minimize c.x`` subject to ``F0 + sum_i x_i Fi[i] >= 0``."""

    c: np.ndarray
    F0: np.ndarray
    Fi: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        F0 = np.asarray(self.F0)
        Fi = np.asarray(self.Fi)
        dtype = complex if (np.iscomplexobj(F0) or np.iscomplexobj(Fi)) else float
        F0 = F0.astype(dtype)
        if F0.ndim != 2 or F0.shape[0] != F0.shape[1]:
            raise DimensionMismatchError(f"F0 must be square, got shape {F0.shape}")
        m = F0.shape[0]
        Fi = Fi.astype(dtype).reshape((-1, m, m)) if Fi.size else np.zeros((0, m, m), dtype)
        if c.ndim != 1 or Fi.shape[0] != c.shape[0]:
            raise DimensionMismatchError(
                f"{c.shape[0]} objective coefficients but {Fi.shape[0]} constraint matrices"
            )
        if c.shape[0] > MAX_VARIABLES or m > MAX_BLOCK:
            raise ValueError(
                f"problem size n={c.shape[0]}, m={m} exceeds n<={MAX_VARIABLES}, m<={MAX_BLOCK}"
            )
        if _hermitian_deviation(F0) > HERMITIAN_TOL or _hermitian_deviation(Fi) > HERMITIAN_TOL:
            raise ValueError("F0 and every Fi must be Hermitian")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "F0", F0)
        object.__setattr__(self, "Fi", Fi)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.F0.shape[0]

    def F(self, x) -> np.ndarray:
        return _affine(self.F0, self.Fi, np.asarray(x, dtype=float))

    def dual_residual(self, Z) -> np.ndarray:
        """``Tr[F_i Z] - c_i`` for every i."""
        return np.real(np.einsum("iab,ba->i", self.Fi, Z)) - self.c


@dataclass(eq=False)
class SDPSolution:
    x: np.ndarray
    Z: np.ndarray
    pstar: float
    dstar: float
    gap: float
    status: Status
    newton_steps: int = 0
    #: (t, primal objective, dual objective) after every centering
    history: List[Tuple[float, float, float]] = field(default_factory=list)


def _affine(F0, Fi, x):
    if x.size == 0:
        return F0.copy()
    m = F0.shape[0]
    return F0 + (x @ Fi.reshape(x.size, m * m)).reshape(m, m)


def _chol(a):
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None


def _min_eig(a):
    return float(np.linalg.eigvalsh(a)[0])


class _Barrier:
    """Newton machinery shared by phase I and phase II (dense blocks)."""

    def __init__(self, c, F0, Fi, max_steps):
        self.c, self.F0, self.Fi = c, F0, Fi
        self.n = c.shape[0]
        self.m = F0.shape[0]
        self.steps = 0
        self.max_steps = max_steps
        # the dual point F^{-1}/t inherits this residual in Tr[F_i Z] = c_i
        self.residual_tol = 1e-12 * max(1.0, float(np.max(np.abs(c), initial=0.0)))
        self.dual_residual = np.inf
        self.polish = True
        self.last_x = None

    # -- representation-specific pieces ---------------------------------

    def matrix(self, x):
        return _affine(self.F0, self.Fi, x)

    def logdet(self, F):
        """log det F, or None when F is not positive definite."""
        L = _chol(F)
        if L is None:
            return None
        return 2.0 * float(np.sum(np.log(np.real(np.diagonal(L)))))

    def positive(self, F):
        return _chol(F) is not None

    def derivatives(self, F):
        """Barrier gradient ``Tr[F^-1 F_i]``, Hessian and ``F^-1``."""
        Finv = np.linalg.inv(F)
        G = Finv @ self.Fi
        g = np.real(np.einsum("iaa->i", G))
        H = np.real(np.einsum("iab,jba->ij", G, G))
        return g, H, Finv

    def dual_matrix(self, Finv, t):
        return Finv / t

    def dual_point(self, Finv, dx, t):
        """``(F^-1 - F^-1 dF F^-1) / t`` with ``dF`` the Newton step in F.

        Satisfies ``Tr[F_i Z] = c_i`` exactly (not only at the central
        point) and is positive semidefinite whenever the Newton decrement is
        below one.
        """
        n, m = dx.size, self.m
        dF = (dx @ self.Fi.reshape(n, m * m)).reshape(m, m) if n else np.zeros_like(Finv)
        Z = (Finv - Finv @ dF @ Finv) / t
        return 0.5 * (Z + Z.conj().T)

    def trace_F0(self, Z):
        return float(np.real(np.trace(self.F0 @ Z)))

    # -- algorithm --------------------------------------------------------

    def initial_t(self, x):
        """Weight that makes ``x`` as central as possible (least squares)."""
        g, _, _ = self.derivatives(self.matrix(x))
        cc = float(self.c @ self.c)
        t = float(self.c @ g) / cc if cc > 0 else 1.0
        return t if np.isfinite(t) and t > 1e-3 else 1.0

    def center(self, x, t, stop=None, polish=False):
        """Damped Newton on the barrier subproblem. Returns ``(x, Z)``.

        ``Z`` is a dual feasible point built from the last Newton step, or
        None when ``stop(x)`` ended the iteration early.  With
        ``polish`` the iteration continues past the usual decrement test
        until the dual residual reaches round-off.
        """
        F = self.matrix(x)
        best, stalled = np.inf, 0
        while True:
            g, H, Finv = self.derivatives(F)
            grad = t * self.c - g
            self.dual_residual = float(np.abs(grad).max()) / t
            try:
                dx = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                dx = -np.linalg.lstsq(H, grad, rcond=None)[0]
            dec2 = float(-grad @ dx)
            if not np.isfinite(dec2):
                return x, self.dual_matrix(Finv, t)
            if not polish and dec2 / 2.0 <= CENTERING_TOL:
                return x, self.dual_point(Finv, dx, t)
            if polish and dec2 / 2.0 <= FINAL_CENTERING_TOL and self.dual_residual <= self.residual_tol:
                return x, self.dual_point(Finv, dx, t)
            # round-off floor: neither the decrement nor the residual improves
            progress = dec2 + self.dual_residual
            if progress < 0.5 * best:
                best, stalled = progress, 0
            else:
                stalled += 1
                if stalled >= 3 and dec2 < 0.25:
                    return x, self.dual_point(Finv, dx, t)
            if self.steps >= self.max_steps:
                raise MaxIterationsError(f"Newton step budget of {self.max_steps} exhausted")
            self.steps += 1
            alpha, F = self._line_search(x, F, t, dx, dec2)
            x = x + alpha * dx
            self.last_x = x
            if stop is not None and stop(x):
                return x, None
            if float(x @ x) > DIVERGENCE_NORM ** 2:
                raise UnboundedError("iterates diverge along a recession direction")

    def _line_search(self, x, F, t, dx, dec2):
        # damped Newton step of a self-concordant barrier: stays inside the
        # Dikin ellipsoid, so only round-off can make it infeasible
        alpha = 1.0 if dec2 < 0.25 else 1.0 / (1.0 + np.sqrt(dec2))
        for _ in range(60):
            Fa = self.matrix(x + alpha * dx)
            if self.positive(Fa):
                return alpha, Fa
            alpha *= 0.5
        return 0.0, F

    def run(self, x, tol, stop=None, history=None):
        t = self.initial_t(x)
        while True:
            last = self.m / t < tol
            x, Z = self.center(x, t, stop, polish=last and self.polish)
            if Z is None:
                return x, t, None
            if history is not None:
                history.append((t, float(self.c @ x), -self.trace_F0(Z)))
            if last:
                return x, t, Z
            t *= BARRIER_GROWTH


class _DiagonalBarrier(_Barrier):
    """Same iteration when F0 and every F_i are diagonal.

    ``F0`` is stored as an m-vector and ``Fi`` as an (n, m) array.
    """

    def matrix(self, x):
        return self.F0 + x @ self.Fi if x.size else self.F0.copy()

    def logdet(self, F):
        if np.any(F <= 0.0):
            return None
        return float(np.sum(np.log(F)))

    def positive(self, F):
        return bool((F > 0.0).all())

    def derivatives(self, F):
        Finv = 1.0 / F
        G = self.Fi * Finv
        return G.sum(axis=1), G @ G.T, Finv

    def dual_matrix(self, Finv, t):
        return np.diag(Finv / t)

    def dual_point(self, Finv, dx, t):
        return np.diag((Finv - Finv * Finv * (dx @ self.Fi)) / t)

    def trace_F0(self, Z):
        return float(self.F0 @ np.diagonal(Z))


def _is_diagonal(a):
    m = a.shape[-1]
    off = ~np.eye(m, dtype=bool)
    return not np.any(a[..., off])


def _make_barrier(c, F0, Fi, max_steps):
    if _is_diagonal(F0) and _is_diagonal(Fi):
        return _DiagonalBarrier(
            c, np.real(np.diagonal(F0)).copy(),
            np.real(np.diagonal(Fi, axis1=-2, axis2=-1)).reshape(len(c), -1), max_steps,
        )
    return _Barrier(c, F0, Fi, max_steps)


def _block_diag(blocks):
    size = sum(b.shape[-1] for b in blocks)
    lead = blocks[0].shape[:-2]
    dtype = np.result_type(*blocks)
    out = np.zeros(lead + (size, size), dtype=dtype)
    k = 0
    for b in blocks:
        w = b.shape[-1]
        out[..., k:k + w, k:k + w] = b
        k += w
    return out


def _phase_one(prob, tol, max_steps):
    """Find x with F(x) > 0 by minimizing s subject to F(x) + sI >= 0.

    The box ``-R <= x_i <= R`` and ``s >= -1`` keep the auxiliary problem
    bounded even when I lies in the span of the F_i.
    """
    n, m = prob.n, prob.m
    R = PHASE_ONE_BOX
    s0 = max(0.0, -_min_eig(prob.F0)) + 1.0
    dtype = prob.F0.dtype
    # variables z = (x, s); constraint blocks: [F(x) + sI, s + 1, R - x, R + x]
    F0 = _block_diag([prob.F0, np.ones((1, 1)), R * np.eye(n), R * np.eye(n)]).astype(dtype)
    Fi = []
    for i in range(n):
        e = np.zeros((n, n))
        e[i, i] = 1.0
        Fi.append(_block_diag([prob.Fi[i], np.zeros((1, 1)), -e, e]))
    Fi.append(_block_diag([np.eye(m), np.ones((1, 1)), np.zeros((n, n)), np.zeros((n, n))]))
    barrier = _make_barrier(np.concatenate([np.zeros(n), [1.0]]), F0,
                            np.array(Fi, dtype=dtype), max_steps)
    history = []
    try:
        z, _, _ = barrier.run(np.concatenate([np.zeros(n), [s0]]), tol,
                              stop=lambda z: z[-1] < 0.0, history=history)
    except MaxIterationsError:
        # a positive dual bound already certifies infeasibility
        if history and history[-1][2] > 0.0:
            raise InfeasibleError(
                f"no strictly feasible point: phase I bound s >= {history[-1][2]:.3g}"
            ) from None
        raise
    if z[-1] >= 0.0 or _chol(prob.F(z[:n])) is None:
        raise InfeasibleError(f"no strictly feasible point: phase I optimum s = {z[-1]:.3g}")
    return z[:n], barrier.steps


def solve_sdp(prob: SDPProblem, tol: float = DEFAULT_TOL, max_steps: int = MAX_NEWTON_STEPS,
              x0=None, polish: bool = False) -> SDPSolution:
    """Solve ``prob`` to a certified duality gap below ``tol``.

    Parameters
    ----------
    prob : SDPProblem
    tol : float
        Target duality gap ``m / t``.
    max_steps : int
        Newton step budget shared by phase I and phase II.
    x0 : array_like, optional
        Strictly feasible starting point; skips phase I.
    polish : bool
        Keep Newton-iterating at the final barrier weight until the dual
        residual of the central point ``F(x)^-1 / t`` reaches round-off.
        The returned dual point is corrected by the last Newton step and is
        exactly dual feasible either way, so this is rarely needed.

    Raises
    ------
    InfeasibleError
        Phase I found no strictly feasible point.
    UnboundedError
        The objective decreases without bound.
    MaxIterationsError
        The Newton budget ran out; ``err.solution`` holds the last iterate
        when it is strictly feasible.
    """
    steps = 0
    if x0 is not None:
        x = np.asarray(x0, dtype=float)
        if _chol(prob.F(x)) is None:
            raise NotFeasibleError("x0 is not strictly feasible")
    elif _chol(prob.F0) is not None:
        x = np.zeros(prob.n)
    else:
        x, steps = _phase_one(prob, tol, max_steps)

    barrier = _make_barrier(prob.c, prob.F0, prob.Fi, max_steps)
    barrier.steps = steps
    barrier.polish = polish
    barrier.last_x = x
    history = []
    try:
        x, t, Z = barrier.run(x, tol, history=history)
    except UnboundedError as err:
        err.solution = None
        raise
    except MaxIterationsError as err:
        if history:
            t = history[-1][0]
            x = barrier.last_x
            Finv = barrier.derivatives(barrier.matrix(x))[2]
            err.solution = _solution(prob, x, barrier.dual_matrix(Finv, t),
                                     Status.MAX_ITERATIONS, barrier.steps, history)
        raise
    sol = _solution(prob, x, Z, Status.OPTIMAL, barrier.steps, history)
    log.debug("solve_sdp: %d Newton steps, gap %.3g", sol.newton_steps, sol.gap)
    return sol


def _polish_dual(prob, Z, rounds=2):
    """Restore ``Tr[F_i Z] = c_i`` lost to round-off in ``F(x)^{-1}``.

    Near the boundary F(x) has eigenvalues of order 1/t, so its inverse is
    only accurate to about ``1e-16 * t`` relative.  The correction
    ``Z B Z`` with ``B = sum_j beta_j F_j`` is a congruence-scaled update,
    so it stays inside the PSD cone for residuals this small.
    """
    for _ in range(rounds):
        res = prob.dual_residual(Z)
        if not res.size or np.max(np.abs(res)) == 0.0:
            break
        ZF = Z @ prob.Fi
        M = np.real(np.einsum("iab,jba->ij", ZF, ZF))
        beta = np.linalg.lstsq(M, -res, rcond=None)[0]
        B = np.tensordot(beta, prob.Fi, axes=1)
        Z = Z + Z @ B @ Z
        Z = 0.5 * (Z + Z.conj().T)
    return Z


def _solution(prob, x, Z, status, steps, history):
    Z = _polish_dual(prob, 0.5 * (Z + Z.conj().T))
    pstar = float(prob.c @ x)
    dstar = float(-np.real(np.trace(prob.F0 @ Z)))
    return SDPSolution(x=x, Z=Z, pstar=pstar, dstar=dstar, gap=pstar - dstar,
                       status=status, newton_steps=steps, history=history)


def duality_gap(prob: SDPProblem, x, Z) -> float:
    """Gap ``c.x + Tr[F0 Z]`` between a primal and a dual feasible point.

    The value is also computed as ``Tr[F(x) Z]``; the two must agree.

    Raises
    ------
    NotFeasibleError
        ``F(x)`` or ``Z`` has an eigenvalue below ``-1e-9``, a dual equality
        ``Tr[F_i Z] = c_i`` is off by more than ``1e-8``, or the two gap
        expressions disagree by more than ``1e-10``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    Z = np.asarray(Z)
    if x.shape != (prob.n,) or Z.shape != (prob.m, prob.m):
        raise DimensionMismatchError("x or Z does not match the problem dimensions")
    Fx = prob.F(x)
    if _min_eig(Fx) < -FEASIBILITY_TOL:
        raise NotFeasibleError("primal: F(x) is not positive semidefinite")
    if _min_eig(0.5 * (Z + Z.conj().T)) < -FEASIBILITY_TOL:
        raise NotFeasibleError("dual: Z is not positive semidefinite")
    res = prob.dual_residual(Z)
    if res.size and np.max(np.abs(res)) > DUAL_EQUALITY_TOL:
        i = int(np.argmax(np.abs(res)))
        raise NotFeasibleError(f"dual: Tr[F_{i + 1} Z] differs from c_{i + 1} by {res[i]:.3g}")
    via_objectives = float(prob.c @ x + np.real(np.trace(prob.F0 @ Z)))
    via_product = float(np.real(np.trace(Fx @ Z)))
    if abs(via_objectives - via_product) > GAP_AGREEMENT_TOL:
        raise NotFeasibleError(
            f"gap expressions disagree: {via_objectives!r} vs {via_product!r}"
        )
    return via_product


def check_slackness(Fx, Z, tol: float) -> bool:
    """Complementary slackness: ``F(x) Z`` and ``Z F(x)`` vanish entrywise."""
    Fx, Z = np.asarray(Fx), np.asarray(Z)
    return bool(np.max(np.abs(Fx @ Z)) <= tol and np.max(np.abs(Z @ Fx)) <= tol)


def check_solution(prob: SDPProblem, sol: SDPSolution) -> Optional[str]:
    """Name of the first violated optimality invariant, or None."""
    if _min_eig(prob.F(sol.x)) < -FEASIBILITY_TOL:
        return "primal feasibility"
    if _min_eig(sol.Z) < -FEASIBILITY_TOL:
        return "dual positivity"
    if sol.x.size and np.max(np.abs(prob.dual_residual(sol.Z))) > DUAL_EQUALITY_TOL:
        return "dual equality"
    if not -1e-9 <= sol.gap <= 1e-6:
        return "duality gap"
    return None
