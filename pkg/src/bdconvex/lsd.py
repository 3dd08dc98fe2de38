"""Optimal Lewenstein-Sanpera decomposition of Bell-diagonal states.

    rho = lam * rho_s + (1 - lam) * |psi_k><psi_k|

with ``rho_s`` separable and ``lam`` as large as possible.  For an
entangled Bell-diagonal state with dominant weight ``p_k > 1/2`` the
optimum is ``lam = 2 (1 - p_k)``; ``rho_s`` keeps ``1/2`` on label ``k`` and
rescales the other weights by ``1 / (2 (1 - p_k))``.  Everything here works
on Bell weights; 4x4 matrices appear only in :func:`residual_check`.
"""

from dataclasses import dataclass

import numpy as np

from bdconvex import _jacobi
from bdconvex.bdstate import BDState, classify, density_matrix
from bdconvex.errors import MismatchError, NotSeparableError

RECOMBINATION_TOL = 1e-9
PURE_TOL = 1e-15


@dataclass(frozen=True)
class LSDecomposition:
    """``lam * separable + (1 - lam) * |psi_k><psi_k|`` with k = entangled_index."""

    lam: float
    separable: BDState
    entangled_index: int
    entangled_weight: float

    def recombine(self) -> np.ndarray:
        """Bell weights of the mixture this decomposition describes."""
        w = self.lam * self.separable.p
        w[self.entangled_index - 1] += self.entangled_weight
        return w


def lambda_for_candidate(rho: BDState, sigma: BDState) -> float:
    """Largest ``lam`` with ``rho - lam * sigma >= 0``.

    This is ``min_i p_i / sigma_i`` over the labels where ``sigma_i > 0``.
    A label with ``sigma_i > 0`` and ``p_i = 0`` makes the minimum 0, which
    is returned as is rather than raised.

    Raises
    ------
    NotSeparableError
        ``sigma`` is entangled.
    """
    if not classify(sigma).is_separable:
        raise NotSeparableError(f"sigma = {sigma.p.tolist()} is entangled")
    support = sigma.p > 0.0
    return float(np.min(rho.p[support] / sigma.p[support]))


def optimal_lsd(rho: BDState) -> LSDecomposition:
    """Closed-form optimal decomposition.

    Separable input gives ``lam = 1``, the state itself as separable part and
    the label of its largest weight as (empty) pure part.  A pure Bell state
    gives ``lam = 0`` with the uniform state standing in for the separable
    part.
    """
    region = classify(rho)
    if region.is_separable:
        return LSDecomposition(1.0, rho, rho.dominant, 0.0)
    k = region.index - 1
    pk = float(rho.p[k])
    if pk >= 1.0 - PURE_TOL:
        return LSDecomposition(0.0, BDState(np.full(4, 0.25)), k + 1, 1.0)
    lam = 2.0 * (1.0 - pk)
    sep = rho.p / lam
    sep[k] = 0.5
    return LSDecomposition(lam, BDState(sep), k + 1, 1.0 - lam)


def _check_recombination(rho, d):
    err = float(np.max(np.abs(d.recombine() - rho.p)))
    if err > RECOMBINATION_TOL:
        raise MismatchError(f"decomposition misses rho by {err:.3g}")


def residual_spectrum(rho: BDState, d: LSDecomposition) -> np.ndarray:
    """Ascending eigenvalues of ``(rho - lam * sigma) / (1 - lam)``.

    Computed from the full 4x4 matrices with the Jacobi solver. Returns
    ``(0, 0, 0, 0)`` when ``lam = 1``.

    Raises
    ------
    MismatchError
        ``d`` does not recombine to ``rho`` within ``1e-9``.
    """
    _check_recombination(rho, d)
    if d.lam >= 1.0:
        return np.zeros(4)
    m = (density_matrix(rho) - d.lam * density_matrix(d.separable)) / (1.0 - d.lam)
    return _jacobi.eigvalsh(m)


def residual_check(rho: BDState, d: LSDecomposition) -> float:
    """Second-largest eigenvalue of the normalized residual.

    Zero (to round-off) exactly when the entangled part is pure.

    Raises
    ------
    MismatchError
    """
    return float(residual_spectrum(rho, d)[-2])
