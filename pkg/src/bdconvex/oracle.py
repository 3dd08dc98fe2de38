"""Brute-force lattice scans over separable Bell-diagonal states.

The lattice holds points ``w = step * (i, j, k, .)`` whose fourth weight is
fixed by normalization; points with a weight above 1/2 or a negative
fourth weight are skipped.  A full scan at fine steps is too large, so the
scan is multilevel: the whole separable region at step ``1e-2``, then
repeated passes at a ten times finer step in a box of five coarse steps
around the previous optimum, ending at the requested step.

Ties go to the lexicographically smallest ``(i, j, k)`` in the final pass.
"""

from dataclasses import dataclass

import numpy as np

from bdconvex.bdstate import BDState, classify
from bdconvex.errors import NotEntangledError, StepOutOfRangeError

MIN_STEP = 1e-4
MAX_STEP = 1e-1
COARSE_STEP = 1e-2
REFINEMENT = 10.0
BOX_STEPS = 5
_EPS = 1e-12


@dataclass(frozen=True)
class GridResult:
    point: BDState
    value: float
    grid_step: float
    points_evaluated: int

    @property
    def argmin_or_max(self) -> BDState:
        return self.point


def _ree_values(W, p):
    """``sum w log2(w/p)`` for each row of ``W``; inf off the support of p."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(W > 0.0, W * np.log2(W / p), 0.0)
    return terms.sum(axis=1)


def _lambda_values(W, p):
    """``min_i p_i / w_i`` over ``w_i > 0`` for each row of ``W``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(W > 0.0, p / W, np.inf)
    return ratios.min(axis=1)


def _levels(step):
    if step >= COARSE_STEP:
        return [step]
    levels = [COARSE_STEP]
    while levels[-1] / REFINEMENT > step * (1.0 + 1e-9):
        levels.append(levels[-1] / REFINEMENT)
    levels.append(step)
    return levels


def _pass(values, p, step, center=None, half=None):
    """Best lattice point at ``step``; ``center`` and ``half`` in lattice units."""
    top = int(np.floor(0.5 / step + 1e-9))
    if center is None:
        lo, hi = np.zeros(3, dtype=int), np.full(3, top)
    else:
        lo = np.maximum(center - half, 0)
        hi = np.minimum(center + half, top)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    I = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    W3 = I * step
    w4 = 1.0 - W3.sum(axis=1)
    keep = (w4 >= -_EPS) & (w4 <= 0.5 + _EPS)
    I, W = I[keep], np.column_stack([W3[keep], np.clip(w4[keep], 0.0, None)])
    v = values(W, p)
    best = int(np.argmin(v))
    return I[best], W[best], float(v[best]), W.shape[0]


def _scan(rho, step, values):
    if not MIN_STEP <= step <= MAX_STEP:
        raise StepOutOfRangeError(f"step {step!r} outside [{MIN_STEP}, {MAX_STEP}]")
    if not classify(rho).is_entangled:
        raise NotEntangledError(f"rho = {rho.p.tolist()} is separable")
    count = 0
    center = half = None
    prev = None
    for h in _levels(step):
        if prev is not None:
            center = np.rint(w[:3] / h).astype(int)
            half = int(np.ceil(BOX_STEPS * prev / h - 1e-9))
        idx, w, v, n = _pass(values, rho.p, h, center, half)
        count += n
        prev = h
    return GridResult(BDState(w / w.sum()), v, step, count)


def grid_min_ree(rho: BDState, step: float) -> GridResult:
    """Lattice minimizer of ``I(w; p)`` (bits) over separable ``w``.

    Raises
    ------
    StepOutOfRangeError
        ``step`` outside ``[1e-4, 1e-1]``.
    NotEntangledError
    """
    return _scan(rho, step, _ree_values)


def grid_max_lambda(rho: BDState, step: float) -> GridResult:
    """Lattice maximizer of the candidate weight ``min_i p_i / sigma_i``.

    Raises
    ------
    StepOutOfRangeError
    NotEntangledError
    """
    res = _scan(rho, step, lambda W, p: -_lambda_values(W, p))
    return GridResult(res.point, -res.value, res.grid_step, res.points_evaluated)
