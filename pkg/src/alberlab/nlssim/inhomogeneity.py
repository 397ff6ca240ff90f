"""Inhomogeneity fields relative to a plane-wave or a computed background."""

from __future__ import annotations

import numpy as np

from .solver import WaveField


def extract_inhomogeneity_planewave(field: WaveField, A: float, q: float) -> np.ndarray:
    """``delta = u exp(-i q A^2 t) / A - 1`` per snapshot, shape ``(n_times, N_x)``."""
    if A == 0:
        raise ValueError("plane-wave amplitude must be nonzero")
    rot = np.exp(-1j * q * A**2 * field.times)[:, None]
    return field.snapshots * rot / A - 1.0


def extract_inhomogeneity_general(v: WaveField, u: WaveField) -> np.ndarray:
    """Pointwise ``v - u`` for runs stored on the same grid at the same times."""
    if v.snapshots.shape != u.snapshots.shape:
        raise ValueError(f"grid mismatch: {v.snapshots.shape} vs {u.snapshots.shape}")
    if not np.allclose(v.times, u.times, rtol=0, atol=1e-12):
        raise ValueError("snapshot times differ")
    if not np.allclose(v.x, u.x, rtol=0, atol=1e-12):
        raise ValueError("spatial grids differ")
    return v.snapshots - u.snapshots
