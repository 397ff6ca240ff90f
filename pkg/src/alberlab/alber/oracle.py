"""Truncated-matrix eigenvalue test for the linearized periodized Alber dynamics.

On modes ``|k|, |l| <= K`` the coefficients of the inhomogeneity obey

    d r_{k,l}/dt = -i (2 pi^2 p / L^2)(k^2 - l^2) r_{k,l}
                   + i q (P_{-l} - P_k) sum_K r_{K, k+l-K}

which couples only entries with the same ``xi = k + l``. Each ``xi`` block is
``diag(d) + b 1^T``. Rows with ``b_k = 0`` only feed themselves, so the block is
block-triangular and its spectrum is the spectrum of the coupled rows plus
the diagonal entries of the rest.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np

from .detect import default_xi_range
from .kernel import KernelParams, h_tilde_L
from .verdict import StabilityVerdict, Witness


def block_matrix(xi: int, kp: KernelParams, K_trunc: int) -> tuple[np.ndarray, np.ndarray]:
    """The ``xi`` block of the operator on ``|k|, |xi - k| <= K_trunc``; returns ``(k, A)``."""
    D = kp.discrete
    L = D.L
    k = np.arange(max(-K_trunc, xi - K_trunc), min(K_trunc, xi + K_trunc) + 1)
    l = xi - k
    d = -1j * (2.0 * math.pi**2 * kp.p / L**2) * (k**2 - l**2)
    b = 1j * kp.q * (D.P(-l) - D.P(k))
    A = np.diag(d) + np.outer(b, np.ones(k.size))
    return k, A


def block_eigenvalues(xi: int, kp: KernelParams, K_trunc: int) -> np.ndarray:
    k, A = block_matrix(xi, kp, K_trunc)
    coupled = np.flatnonzero(np.any(A - np.diag(np.diag(A)) != 0, axis=1))
    free = np.setdiff1d(np.arange(k.size), coupled)
    eig = np.linalg.eigvals(A[np.ix_(coupled, coupled)]) if coupled.size else np.empty(0)
    return np.concatenate([eig, np.diag(A)[free]])


def required_truncation(kp: KernelParams, xi_range: Iterable[int]) -> int:
    """Smallest ``K_trunc`` covering the support (``2 n_max``) and every shifted block."""
    n_max = kp.discrete.n_max
    xis = list(xi_range)
    return max(2 * n_max, n_max + max((abs(x) for x in xis), default=0))


def eigenvalue_oracle(kp: KernelParams, L: Optional[float] = None, K_trunc: Optional[int] = None,
                      xi_range: Optional[Iterable[int]] = None,
                      rel_threshold: float = 1e-8) -> StabilityVerdict:
    """Unstable iff some block has an eigenvalue with real part above
    ``rel_threshold`` times the largest matrix entry."""
    D = kp.discrete
    if L is not None and not math.isclose(L, D.L, rel_tol=1e-12):
        raise ValueError("L does not match the discretization")
    xis = default_xi_range(kp) if xi_range is None else [int(x) for x in xi_range]
    need = required_truncation(kp, xis)
    if K_trunc is None:
        K_trunc = need
    if K_trunc < need:
        raise ValueError(f"K_trunc={K_trunc} does not cover the spectrum support (need >= {need})")

    witnesses, max_re, scale = [], -np.inf, 0.0
    per_xi = {}
    for xi in xis:
        _, A = block_matrix(xi, kp, K_trunc)
        scale = max(scale, float(np.max(np.abs(A))) if A.size else 0.0)
        ev = block_eigenvalues(xi, kp, K_trunc)
        if ev.size:
            per_xi[xi] = float(ev.real.max())
            max_re = max(max_re, float(ev.real.max()))
        witnesses.extend((xi, complex(e)) for e in ev)
    threshold = rel_threshold * scale
    kept = []
    for xi, e in witnesses:
        if e.real > threshold:
            res = abs(complex(h_tilde_L(xi, e, kp)) - 1.0)
            kept.append(Witness(xi, e, res))
    unstable = bool(kept)
    return StabilityVerdict(
        unstable=unstable, method="eigenvalue_oracle",
        status="unstable" if unstable else "stable", witnesses=kept,
        parameters={"p": kp.p, "q": kp.q, "L": D.L, "K_trunc": int(K_trunc), "n_xi": len(xis)},
        tolerances={"rel_threshold": rel_threshold, "threshold": threshold},
        diagnostics={"max_real_eigenvalue": max_re if np.isfinite(max_re) else None,
                     "entry_scale": scale},
    )
