"""Cyclic (periodic) tridiagonal solves via Sherman-Morrison on top of LAPACK ``gtsv``."""

from __future__ import annotations

import numpy as np
from scipy.linalg import get_lapack_funcs


class LinearSolveError(RuntimeError):
    """Raised when a cyclic tridiagonal system cannot be solved reliably."""


def solve_cyclic_tridiagonal(lower, diag, upper, rhs):
    """Solve a periodic tridiagonal system.

    Row ``i`` reads ``lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i]``
    with indices taken modulo ``n``, so ``lower[0]`` and ``upper[-1]`` are the
    corner entries.

    Parameters
    ----------
    lower, diag, upper : array_like, shape (n,)
        The three (cyclic) bands. Scalars are broadcast.
    rhs : array_like, shape (n,) or (n, k)

    Returns
    -------
    numpy.ndarray
        Solution with the same shape as ``rhs``.
    """
    diag = np.asarray(diag)
    n = diag.shape[0]
    if n < 3:
        raise ValueError("cyclic tridiagonal system needs n >= 3")
    rhs = np.asarray(rhs)
    dtype = np.result_type(diag, lower, upper, rhs, np.float64)
    lower = np.broadcast_to(np.asarray(lower, dtype=dtype), (n,))
    upper = np.broadcast_to(np.asarray(upper, dtype=dtype), (n,))

    alpha = upper[-1]  # A[n-1, 0]
    beta = lower[0]  # A[0, n-1]
    gamma = -diag[0] if diag[0] != 0 else -1.0

    # A = T + u v^T with u = (gamma, 0, ..., alpha), v = (1, 0, ..., beta/gamma)
    d = np.array(diag, dtype=dtype)
    d[0] -= gamma
    d[-1] -= alpha * beta / gamma
    b = np.empty((n, rhs.reshape(n, -1).shape[1] + 1), dtype=dtype, order="F")
    b[:, :-1] = rhs.reshape(n, -1)
    b[:, -1] = 0.0
    b[0, -1] = gamma
    b[-1, -1] = alpha

    (gtsv,) = get_lapack_funcs(("gtsv",), (d, b))
    _, _, _, sol, info = gtsv(
        np.array(lower[1:]), d, np.array(upper[:-1]), b,
        overwrite_dl=1, overwrite_d=1, overwrite_du=1, overwrite_b=1,
    )
    if info != 0:
        raise LinearSolveError(f"gtsv failed with info={info}")
    y, z = sol[:, :-1], sol[:, -1]
    denom = 1.0 + z[0] + beta / gamma * z[-1]
    if not np.isfinite(denom) or abs(denom) < 1e-14:
        raise LinearSolveError("Sherman-Morrison correction is singular")
    fact = (y[0] + beta / gamma * y[-1]) / denom
    x = y - np.outer(z, fact)
    if not np.all(np.isfinite(x)):
        raise LinearSolveError("non-finite values in cyclic solve")
    return x.reshape(rhs.shape)
