"""Cyclic Jacobi eigenvalue iteration for small dense Hermitian matrices.

Works on stacks of matrices: every rotation is applied to the whole batch at
once, with a per-matrix angle.  Complex Hermitian input is realified to the
symmetric ``[[Re, -Im], [Im, Re]]`` form, whose spectrum is the original one
with every eigenvalue doubled.
"""

import numpy as np

OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 50


def _realify(a):
    re, im = a.real, a.imag
    top = np.concatenate([re, -im], axis=-1)
    bottom = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def _off_norm(a):
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(a[..., mask] ** 2, axis=-1))


def _jacobi_symmetric(a, tol, max_sweeps):
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[-1]
    # absolute for trace-one states, relative for anything larger
    tol = tol * np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
    for _ in range(max_sweeps):
        if np.all(_off_norm(a) < tol):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = np.abs(apq) > 1e-300
                if not np.any(active):
                    continue
                app, aqq = a[:, p, p], a[:, q, q]
                safe_apq = np.where(active, apq, 1.0)
                theta = (aqq - app) / (2.0 * safe_apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c_, s_ = c[:, None], s[:, None]
                # A <- R^T A R with R the plane rotation in (p, q)
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c_ * rp - s_ * rq
                a[:, q, :] = s_ * rp + c_ * rq
                cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c_ * cp - s_ * cq
                a[:, :, q] = s_ * cp + c_ * cq
    else:
        if not np.all(_off_norm(a) < tol):
            raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diagonal(a, axis1=-2, axis2=-1), axis=-1)


def eigvalsh(a, tol=OFF_DIAGONAL_TOL, max_sweeps=MAX_SWEEPS):
    """Ascending eigenvalues of a Hermitian matrix or a stack of them.

    Parameters
    ----------
    a : array_like, shape (..., n, n)
        Hermitian input. Only the Hermitian part is used.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm of every matrix
        in the batch drops below ``tol``.

    Returns
    -------
    ndarray, shape (..., n)
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    if np.iscomplexobj(a) and np.any(a.imag != 0.0):
        w = _jacobi_symmetric(_realify(a), tol, max_sweeps)[:, ::2]
    else:
        w = _jacobi_symmetric(np.real(a), tol, max_sweeps)
    return w.reshape(batch_shape + (n,))
