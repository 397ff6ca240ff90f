"""Recover the inhomogeneity coefficients ``r_{k, xi-k}(t)`` from the driver ``f(xi, t)``."""

from __future__ import annotations

import math

import numpy as np

from .kernel import KernelParams, active_modes


def reconstruct_r(xi: int, times, f_history, kp: KernelParams, r0=None, k=None) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the mild (Duhamel) form on a time grid by trapezoidal quadrature.

    ``r_{k,xi-k}(t) = e^{-i d_k t} r0_k + int_0^t e^{-i d_k (t - s)} b_k f(s) ds`` with
    ``d_k = 2 pi^2 p xi (2k - xi) / L^2`` and ``b_k = i q (P_{k-xi} - P_k)``.

    Parameters
    ----------
    times : array, shape (n_t,)
        Increasing sample times starting at 0.
    f_history : array, shape (n_t,)
        ``f(xi, t)`` at those times.
    r0 : array or None
        Initial coefficients on ``k`` (zeros if None).
    k : array of int or None
        Modes to reconstruct; defaults to the kernel's active modes for ``xi``.

    Returns
    -------
    k, r : ndarray, ndarray of shape (n_t, len(k))
    """
    D = kp.discrete
    times = np.asarray(times, dtype=float)
    f = np.asarray(f_history, dtype=complex)
    if times.ndim != 1 or f.shape != times.shape:
        raise ValueError("times and f_history must be 1-D arrays of equal length")
    if times[0] != 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must start at 0 and increase strictly")
    if k is None:
        k = active_modes(D, xi)[0]
    k = np.asarray(k)
    r0 = np.zeros(k.size, dtype=complex) if r0 is None else np.asarray(r0, dtype=complex)
    if r0.shape != k.shape:
        raise ValueError("r0 must match k")

    d = 2.0 * math.pi**2 * kp.p * xi * (2.0 * k - xi) / D.L**2
    b = 1j * kp.q * (D.P(k - xi) - D.P(k))

    # I_k(t_n) = e^{-i d t_n} int_0^{t_n} e^{i d s} f(s) ds, accumulated panel by panel
    g = np.exp(1j * np.outer(times, d)) * f[:, None]
    dt = np.diff(times)[:, None]
    cum = np.vstack([np.zeros((1, k.size), dtype=complex),
                     np.cumsum(0.5 * dt * (g[1:] + g[:-1]), axis=0)])
    phase = np.exp(-1j * np.outer(times, d))
    r = phase * (r0[None, :] + b[None, :] * cum)
    return k, r
