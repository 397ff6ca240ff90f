"""Linear modulation-instability analysis of the plane wave ``A exp(i q A^2 t)`` on a period L."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class LinearMIReport:
    """Rows ``(n, omega_n^2)`` with ``(2 pi omega_n)^2 = kappa^2 (p^2 kappa^2 - 2 p q A^2)``,
    ``kappa = 2 pi n / L``. Mode ``n`` grows like ``exp(2 pi |omega_n| t)`` when ``omega_n^2 < 0``."""

    mode_table: np.ndarray = field(repr=False)
    L_c: float
    unstable_modes: list[int]

    def omega_squared(self, n: int) -> float:
        row = np.flatnonzero(self.mode_table[:, 0] == n)
        return float(self.mode_table[row[0], 1])

    def growth_rate(self, n: int) -> float:
        """Exponential rate ``2 pi |omega_n|`` of mode n (0 if the mode is stable)."""
        w2 = self.omega_squared(n)
        return 2.0 * math.pi * math.sqrt(-w2) if w2 < 0 else 0.0


def critical_length(p: float, q: float, A: float) -> float:
    """Bifurcation length ``2 pi sqrt(p) / (A sqrt(2 q))``."""
    if A <= 0:
        raise ValueError(f"amplitude must be positive, got {A}")
    return 2.0 * math.pi * math.sqrt(p) / (A * math.sqrt(2.0 * q))


def linear_mi_analysis(p: float, q: float, A: float, L: float, n_max: int) -> LinearMIReport:
    if A <= 0:
        raise ValueError(f"amplitude must be positive, got {A}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(-n_max, n_max + 1)
    kappa = 2.0 * math.pi * n / L
    omega_sq = kappa**2 * (p**2 * kappa**2 - 2.0 * p * q * A**2) / (2.0 * math.pi) ** 2
    table = np.column_stack([n, omega_sq])
    unstable = [int(k) for k, w in zip(n, omega_sq) if k != 0 and w < 0]
    return LinearMIReport(table, critical_length(p, q, A), unstable)


def water_wave_Lc(wavelength: float, A: float, g: float = 9.81) -> float:
    """Critical length for deep-water waves, ``lambda0^2 / (4 pi sqrt(2) A)``.

    Uses ``p = sqrt(g) / (8 k0^{3/2})`` and ``q = sqrt(g) k0^{5/2} / 2`` with
    ``k0 = 2 pi / lambda0``; ``g`` cancels.
    """
    if wavelength <= 0 or A <= 0 or g <= 0:
        raise ValueError("wavelength, amplitude and gravity must be positive")
    k0 = 2.0 * math.pi / wavelength
    p = math.sqrt(g) / (8.0 * k0**1.5)
    q = math.sqrt(g) * k0**2.5 / 2.0
    return critical_length(p, q, A)
