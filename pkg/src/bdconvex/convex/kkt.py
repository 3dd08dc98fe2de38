"""First-order optimality certificates for smooth constrained problems.

    minimize f(x)  subject to  h(x) = 0,  g(x) <= 0

with Lagrangian ``L = f + zeta.h + y.g``.  Gradients are supplied by the
caller as Jacobian callables; nothing is differentiated numerically.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from bdconvex.errors import DimensionMismatchError

Jacobian = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KKTReport:
    primal_feasible_eq: bool
    primal_feasible_ineq: bool
    dual_feasible: bool
    complementary: bool
    stationary: bool
    max_violation: float
    multipliers: Tuple[np.ndarray, np.ndarray]
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        return (self.primal_feasible_eq and self.primal_feasible_ineq and self.dual_feasible
                and self.complementary and self.stationary)

    def violations(self) -> dict:
        """Names of the failed conditions mapped to False (empty when ok)."""
        flags = {
            "primal_feasible_eq": self.primal_feasible_eq,
            "primal_feasible_ineq": self.primal_feasible_ineq,
            "dual_feasible": self.dual_feasible,
            "complementary": self.complementary,
            "stationary": self.stationary,
        }
        return {k: v for k, v in flags.items() if not v}


def _evaluate(fn, jac, x, mult, name):
    if fn is None:
        if mult.size:
            raise DimensionMismatchError(f"{mult.size} multipliers for absent {name}")
        return np.zeros(0), np.zeros((0, x.size))
    if jac is None:
        raise DimensionMismatchError(f"{name} given without its Jacobian")
    val = np.atleast_1d(np.asarray(fn(x), dtype=float))
    J = np.asarray(jac(x), dtype=float).reshape(val.size, -1)
    if J.shape[1] != x.size:
        raise DimensionMismatchError(f"Jacobian of {name} has {J.shape[1]} columns for {x.size} variables")
    if mult.size != val.size:
        raise DimensionMismatchError(f"{name} has {val.size} components but {mult.size} multipliers")
    return val, J


def _worst(v):
    return float(np.max(np.abs(v), initial=0.0))


def check_kkt(grad_f: Jacobian, x, zeta=(), y=(), *,
              h: Optional[Callable] = None, jac_h: Optional[Jacobian] = None,
              g: Optional[Callable] = None, jac_g: Optional[Jacobian] = None,
              tol: float = 1e-9) -> KKTReport:
    """Evaluate the five KKT conditions at ``(x, zeta, y)``.

    Parameters
    ----------
    grad_f : callable
        ``x -> grad f(x)``.
    x : array_like
    zeta, y : array_like
        Multipliers for ``h`` and ``g``; empty when the constraint is absent.
    h, jac_h, g, jac_g : callable, optional
        Constraint values and their Jacobians (rows are gradients).
    tol : float
        Every condition is checked to this absolute tolerance.

    Raises
    ------
    DimensionMismatchError
        Sizes of values, Jacobians and multipliers disagree.
    """
    x = np.asarray(x, dtype=float).ravel()
    zeta = np.asarray(zeta, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    hv, Jh = _evaluate(h, jac_h, x, zeta, "h")
    gv, Jg = _evaluate(g, jac_g, x, y, "g")
    grad = np.asarray(grad_f(x), dtype=float).ravel()
    if grad.size != x.size:
        raise DimensionMismatchError(f"gradient has {grad.size} entries for {x.size} variables")

    eq = _worst(hv)
    ineq = max(0.0, float(np.max(gv, initial=0.0)))
    dual = max(0.0, -float(np.min(y, initial=0.0)))
    comp = _worst(y * gv)
    stat = _worst(grad + Jh.T @ zeta + Jg.T @ y)
    return KKTReport(
        primal_feasible_eq=eq <= tol,
        primal_feasible_ineq=ineq <= tol,
        dual_feasible=dual <= tol,
        complementary=comp <= tol,
        stationary=stat <= tol,
        max_violation=max(eq, ineq, dual, comp, stat),
        multipliers=(zeta, y),
        tol=tol,
    )
