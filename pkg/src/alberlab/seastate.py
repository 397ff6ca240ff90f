"""Random-phase realizations of a sea state on the torus and their ensemble statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectrum import DiscreteSpectrum, PowerSpectrum, SpectrumError, discretize

GENERATOR = "numpy.random.PCG64"


class AliasingError(ValueError):
    """The requested grid cannot resolve every mode of the realization."""


@dataclass(frozen=True)
class Realization:
    """``u0(x) = sum_j A_j exp(2 pi i (k_j x + phi_j))`` with ``k_j = j m / L``."""

    amplitudes: np.ndarray = field(repr=False)
    wavenumbers: np.ndarray = field(repr=False)
    phases: np.ndarray = field(repr=False)
    domain_length: float
    spacing_multiplier: int
    seed: int
    generator: str = GENERATOR

    @property
    def mode_count(self) -> int:
        return int(self.amplitudes.size)

    @property
    def bins(self) -> np.ndarray:
        """Integer Fourier index ``n = j m`` of every mode."""
        return self.spacing_multiplier * np.arange(1, self.mode_count + 1)

    @property
    def variance(self) -> float:
        return float(np.sum(self.amplitudes**2))

    def mode_table(self) -> np.ndarray:
        """Rows ``(j, A_j, k_j, phi_j)``."""
        j = np.arange(1, self.mode_count + 1)
        return np.column_stack([j, self.amplitudes, self.wavenumbers, self.phases])


def mode_count(S: PowerSpectrum, L: float, m: int) -> int:
    return int(math.floor(S.support_max * L / m + 1e-9))


def generate(S: PowerSpectrum, L: float, m: int = 1, seed: int = 0) -> Realization:
    """Draw a realization with i.i.d. U[0, 1) phases and amplitudes ``sqrt(dk S(k_j))``."""
    if not L > 0:
        raise SpectrumError(f"domain length must be positive, got {L}")
    if int(m) != m or m < 1:
        raise SpectrumError("spacing multiplier must be a positive integer")
    m = int(m)
    M = mode_count(S, L, m)
    if M < 1:
        raise SpectrumError(f"domain L={L} too short: no mode with k <= k_max={S.support_max}")
    dk = m / L
    k = dk * np.arange(1, M + 1)
    amps = np.sqrt(dk * S(k))
    rng = np.random.Generator(np.random.PCG64(seed))
    phases = rng.random(M)
    return Realization(amps, k, phases, float(L), m, int(seed))


def evaluate(r: Realization, x) -> np.ndarray:
    """Direct summation of the mode series at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if r.mode_count == 0:
        return np.zeros(x.shape, dtype=complex)
    coeff = r.amplitudes * np.exp(2j * np.pi * r.phases)
    # reduce the phase argument modulo 1 per mode to keep it accurate for large x
    arg = np.mod(np.multiply.outer(x, r.wavenumbers), 1.0)
    return np.exp(2j * np.pi * arg) @ coeff


def grid(L: float, n_x: int) -> np.ndarray:
    return -L / 2 + L * np.arange(n_x) / n_x


def sample_on_grid(r: Realization, n_x: int) -> np.ndarray:
    """Values on ``x_i = -L/2 + i L / n_x`` via an inverse FFT of the mode array."""
    n_top = r.spacing_multiplier * r.mode_count
    if n_x < 2 * n_top:
        raise AliasingError(f"N_x={n_x} < 2 m M = {2 * n_top}; modes would alias")
    c = np.zeros(n_x, dtype=complex)
    n = r.bins
    # exp(2 pi i n x_i / L) = (-1)^n exp(2 pi i n i / n_x) on this grid
    c[n] = r.amplitudes * np.exp(2j * np.pi * r.phases) * np.where(n % 2, -1.0, 1.0)
    return np.fft.ifft(c) * n_x


@dataclass(frozen=True)
class Ensemble:
    realizations: tuple
    base_seed: int

    def __len__(self):
        return len(self.realizations)


def derive_seeds(base_seed: int, n: int) -> np.ndarray:
    seeds = np.random.SeedSequence(base_seed).generate_state(n, dtype=np.uint64)
    if np.unique(seeds).size != n:  # pragma: no cover - 64-bit collision
        raise RuntimeError("derived seeds collide")
    return seeds


def generate_ensemble(S: PowerSpectrum, L: float, n: int, m: int = 1, base_seed: int = 0) -> Ensemble:
    seeds = derive_seeds(base_seed, n)
    return Ensemble(tuple(generate(S, L, m, int(s)) for s in seeds), int(base_seed))


def autocorrelation_samples(e: Ensemble, lag: float, x=None) -> np.ndarray:
    """Per-realization estimates of ``E[u(x) conj(u(x - lag))]``.

    Each estimate averages over the base points ``x``; by default all points of
    the coarsest alias-free grid (``N_x = 2 m M``), exploiting homogeneity.
    """
    if len(e) == 0:
        raise ValueError("ensemble is empty")
    r0 = e.realizations[0]
    if x is None:
        x = grid(r0.domain_length, max(2 * r0.spacing_multiplier * r0.mode_count, 2))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(len(e), dtype=complex)
    for i, r in enumerate(e.realizations):
        out[i] = np.mean(evaluate(r, x) * np.conj(evaluate(r, x - lag)))
    return out


def ensemble_autocorrelation(e: Ensemble, lag: float, x=None) -> complex:
    return complex(np.mean(autocorrelation_samples(e, lag, x)))


def discrete_spectrum_of(r: Realization) -> DiscreteSpectrum:
    """The ``P_n`` implied by a realization's amplitudes (``P_{j m} = A_j^2``)."""
    coeffs = np.zeros(r.spacing_multiplier * r.mode_count + 1)
    coeffs[r.bins] = r.amplitudes**2
    return DiscreteSpectrum(coeffs, r.domain_length, r.spacing_multiplier, r.mode_count)


__all__ = [
    "AliasingError", "Ensemble", "Realization", "autocorrelation_samples", "derive_seeds",
    "discrete_spectrum_of", "discretize", "ensemble_autocorrelation", "evaluate", "generate",
    "generate_ensemble", "grid", "sample_on_grid",
]
