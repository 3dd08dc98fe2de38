"""Relative entropy and its minimization under linear constraints.

The objective is ``I(w; q) = sum_j w_j log(w_j / q_j)`` with ``w`` the
candidate distribution and ``q`` a fixed strictly positive prior.  Under

    1.w = 1,   A w = b,   w >= 0

the minimizer has the Gibbs form ``w_j = u_j / sum(u)`` with
``u_j = q_j exp(-a_j . y)``, where ``a_j`` is column j of ``A`` and ``y``
minimizes the smooth convex dual ``log sum_j u_j + b.y``.

Internally everything is in nats; reported entropies are in bits.

For Bell-diagonal states ``q`` is the Bell spectrum and the separable
candidates are constrained by their dominant weight ``w_k = b1 <= 1/2``.
Note the argument order: ``I(w; q)`` puts the separable candidate first,
which is the reverse of the usual quantum relative entropy ``S(rho || sigma)``.
Call :func:`relative_entropy` with swapped arguments for that quantity.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bdconvex.bdstate import BDState, classify, concurrence
from bdconvex.convex.kkt import KKTReport, check_kkt
from bdconvex.convex.lp import solve_lp
from bdconvex.errors import (
    InfeasibleError,
    NewtonDivergenceError,
    NoSlaterPointError,
    NotDistributionError,
    NotEntangledError,
    OutOfRangeError,
    UnboundedError,
)

LN2 = np.log(2.0)
NORMALIZATION_TOL = 1e-9
NEGATIVE_TOL = 1e-12
SLATER_MARGIN = 1e-12
RESIDUAL_TOL = 1e-12
MAX_NEWTON = 100
MAX_HALVINGS = 30


def _distribution(w, name="w") -> np.ndarray:
    w = np.asarray(w, dtype=float).ravel()
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise NotDistributionError(f"{name} must be a non-empty finite vector")
    if np.any(w < -NEGATIVE_TOL):
        raise NotDistributionError(f"{name} has a negative entry")
    if abs(w.sum() - 1.0) > NORMALIZATION_TOL:
        raise NotDistributionError(f"{name} sums to {w.sum()!r}, not 1")
    return np.clip(w, 0.0, None)


def _xlogy_ratio(w, q):
    """``sum w log(w / q)`` in nats with 0 log 0 = 0 and +inf off support."""
    support = w > 0.0
    if np.any(q[support] <= 0.0):
        return np.inf
    ws = w[support]
    return float(np.sum(ws * np.log(ws / q[support])))


def shannon_entropy(w) -> float:
    """``-sum w log2 w`` in bits.

    Raises
    ------
    NotDistributionError
    """
    w = _distribution(w)
    return 0.0 - _xlogy_ratio(w, np.ones_like(w)) / LN2


def relative_entropy(w, q) -> float:
    """``sum w log2(w / q)`` in bits; ``inf`` when ``w`` charges a zero of ``q``.

    Raises
    ------
    NotDistributionError
        ``w`` is not a distribution, or ``q`` is negative or of another size.
    """
    w = _distribution(w)
    q = np.asarray(q, dtype=float).ravel()
    if q.shape != w.shape or np.any(q < 0.0) or not np.all(np.isfinite(q)):
        raise NotDistributionError("q must be a nonnegative vector of the same size as w")
    return _xlogy_ratio(w, q) / LN2


def binary_relative_entropy(b: float, p: float) -> float:
    """``b log2(b/p) + (1-b) log2((1-b)/(1-p))``, no range restriction."""
    return relative_entropy([b, 1.0 - b], [p, 1.0 - p])


@dataclass(frozen=True, eq=False)
class EntropyProblem:
    """Minimize ``I(w; q)`` subject to ``1.w = 1`` and ``A w = b``."""

    q: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        q = _distribution(self.q, "q")
        if np.any(q <= 0.0):
            raise NotDistributionError("the prior q must be strictly positive")
        b = np.asarray(self.b, dtype=float).ravel()
        A = np.asarray(self.A, dtype=float).reshape(b.size, q.size)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def d(self) -> int:
        return self.b.size


def bd_entropy_problem(rho: BDState, b1: float, k: int = None) -> EntropyProblem:
    """Single constraint ``w_k = b1`` with prior the spectrum of ``rho``.

    ``k`` is a Bell label and defaults to the dominant one.
    """
    k = rho.dominant if k is None else k
    A = np.zeros((1, 4))
    A[0, k - 1] = 1.0
    return EntropyProblem(q=rho.p, A=A, b=[b1])


def slater_check(prob: EntropyProblem) -> bool:
    """Whether some ``w > 0`` satisfies the constraints.

    Maximizes a margin ``tau`` with ``w - tau >= 0`` by linear programming
    and compares it with ``1e-12``.
    """
    n = prob.q.size
    # variables (v, tau) with w = v + tau * 1
    A = np.vstack([
        np.concatenate([np.ones(n), [float(n)]]),
        np.hstack([prob.A, prob.A.sum(axis=1, keepdims=True)]),
    ])
    b = np.concatenate([[1.0], prob.b])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    try:
        res = solve_lp(c, A, b)
    except (InfeasibleError, UnboundedError):
        return False
    return bool(res.x[-1] > SLATER_MARGIN)


def _gibbs(prob, y):
    """Normalized ``u`` and ``log sum u`` at dual point ``y``."""
    logu = np.log(prob.q) - prob.A.T @ y
    top = logu.max()
    u = np.exp(logu - top)
    s = u.sum()
    return u / s, top + np.log(s)


def min_relative_entropy(prob: EntropyProblem) -> Tuple[np.ndarray, np.ndarray, float]:
    """Constrained minimizer by damped Newton on the dual.

    Returns
    -------
    w_star : ndarray
        Gibbs distribution ``q exp(-A^T y) / Z``.
    y_star : ndarray
        Multipliers of ``A w = b`` (nats).
    value : float
        ``I(w_star; q)`` in bits.

    Raises
    ------
    NoSlaterPointError
        No strictly positive feasible ``w``.
    NewtonDivergenceError
        The residual ``|A w - b|`` is still above ``1e-12`` after 100
        Newton steps.
    """
    if prob.d and not slater_check(prob):
        raise NoSlaterPointError("no strictly positive w satisfies A w = b")
    y = np.zeros(prob.d)
    w, logz = _gibbs(prob, y)
    phi = logz + prob.b @ y
    for _ in range(MAX_NEWTON + 1):
        grad = prob.b - prob.A @ w
        if float(np.max(np.abs(grad), initial=0.0)) < RESIDUAL_TOL:
            return w, y, _xlogy_ratio(w, prob.q) / LN2
        H = (prob.A * w) @ prob.A.T - np.outer(prob.A @ w, prob.A @ w)
        dy = -np.linalg.lstsq(H, grad, rcond=None)[0]
        res = float(np.max(np.abs(grad)))
        step = 1.0
        for _ in range(MAX_HALVINGS):
            y_new = y + step * dy
            w_new, logz_new = _gibbs(prob, y_new)
            phi_new = logz_new + prob.b @ y_new
            # near the optimum phi is flat to round-off; the residual still
            # measures progress there
            if phi_new <= phi + 1e-4 * step * float(grad @ dy):
                break
            if float(np.max(np.abs(prob.b - prob.A @ w_new))) < (1.0 - 1e-4 * step) * res:
                break
            step *= 0.5
        y, w, phi = y_new, w_new, phi_new
    raise NewtonDivergenceError(
        f"residual {np.max(np.abs(prob.b - prob.A @ w)):.3g} after {MAX_NEWTON} Newton steps"
    )


def kkt_report(prob: EntropyProblem, w, y, tol: float = 1e-9) -> KKTReport:
    """KKT conditions of the primal problem at ``(w, y)``.

    Equality multipliers are ``(zeta_0, y)`` for ``(1.w - 1, A w - b)``
    with ``zeta_0 = log sum(u) - 1`` recovered from stationarity; the
    multipliers of ``-w <= 0`` are zero at the interior optimum.
    """
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    _, logz = _gibbs(prob, y)
    n = prob.q.size
    E = np.vstack([np.ones((1, n)), prob.A])
    with np.errstate(divide="ignore", invalid="ignore"):
        return check_kkt(
            lambda x: np.log(x / prob.q) + 1.0,
            w,
            zeta=np.concatenate([[logz - 1.0], y]),
            y=np.zeros(n),
            h=lambda x: E @ x - np.concatenate([[1.0], prob.b]),
            jac_h=lambda x: E,
            g=lambda x: -x,
            jac_g=lambda x: -np.eye(n),
            tol=tol,
        )


def ree_profile(rho: BDState, b1: float) -> float:
    """``I(b1) = b1 log2(b1/p) + (1-b1) log2((1-b1)/(1-p))`` with ``p = p_max``.

    The relative entropy from ``rho`` to the best separable candidate whose
    dominant weight is ``b1``.  It decreases on ``(0, p)``, so over the
    separable range ``b1 <= 1/2`` it is smallest at ``b1 = 1/2``.

    Raises
    ------
    NotEntangledError
    OutOfRangeError
        ``b1`` outside ``(0, 1/2]``.
    """
    if not classify(rho).is_entangled:
        raise NotEntangledError(f"rho = {rho.p.tolist()} is separable")
    if not 0.0 < b1 <= 0.5:
        raise OutOfRangeError(f"b1 = {b1!r} outside (0, 1/2]")
    return binary_relative_entropy(b1, rho.p_max)


@dataclass(frozen=True)
class REEResult:
    value: float
    closest_state: BDState
    multiplier: float
    concurrence: float
    infinite: bool = False


def ree_bd(rho: BDState) -> REEResult:
    """Closed-form minimum of ``I(w; p)`` over separable Bell-diagonal ``w``.

    For an entangled state with dominant label ``k`` the minimizer puts
    ``1/2`` on ``k`` and ``p_i / (2 (1 - p_k))`` elsewhere, and the value is
    ``-log2(1 - c^2) / 2`` with concurrence ``c = 2 p_k - 1``. ``multiplier``
    is the dual variable of ``w_k = 1/2``, ``ln(p_k / (1 - p_k))``.

    A pure Bell state has ``value = inf`` and ``infinite`` set; its closest
    state is reported as the uniform state.
    """
    region = classify(rho)
    c = concurrence(rho)
    if region.is_separable:
        return REEResult(0.0, rho, 0.0, c)
    k = region.index - 1
    pk = float(rho.p[k])
    if pk >= 1.0:
        return REEResult(np.inf, BDState(np.full(4, 0.25)), np.inf, c, infinite=True)
    w = rho.p / (2.0 * (1.0 - pk))
    w[k] = 0.5
    value = -0.5 * np.log2((1.0 - c) * (1.0 + c))
    return REEResult(float(value), BDState(w), float(np.log(pk / (1.0 - pk))), c)
