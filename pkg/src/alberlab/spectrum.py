"""Continuous power spectra S(k) and their discretization on a length-L torus.

Wavenumbers are in cycles per unit length throughout (Fourier kernel
``exp(2 pi i k x)``). Spectra given in radians per unit length must be
converted with :func:`from_radian_spectrum` before use.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize


class SpectrumError(ValueError):
    """Invalid spectrum or discretization parameters."""


@dataclass(frozen=True)
class PowerSpectrum:
    """Nonnegative spectral density supported in ``[support_min, support_max]``.

    ``support_min`` defaults to 0; it only narrows the region that mode sums
    and quadratures need to visit.
    """

    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    support_max: float
    label: str = ""
    support_min: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.support_max < 0 or self.support_min < 0:
            raise SpectrumError("spectrum support must lie in [0, inf)")
        if self.support_min > self.support_max:
            raise SpectrumError("support_min exceeds support_max")

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        inside = (k >= self.support_min) & (k <= self.support_max)
        out = np.zeros(k.shape)
        if np.any(inside):
            out[inside] = np.maximum(self.evaluator(k[inside]), 0.0)
        return out if out.ndim else float(out)

    @property
    def k_max(self) -> float:
        return self.support_max

    def integral(self) -> float:
        """Total variance ``int S dk`` by adaptive quadrature."""
        if self.support_max == self.support_min:
            return 0.0
        val, _ = integrate.quad(
            lambda k: float(self(k)), self.support_min, self.support_max,
            epsabs=0.0, epsrel=1e-13, limit=400,
        )
        return val

    def describe(self) -> dict:
        return {"label": self.label, "support_min": self.support_min,
                "support_max": self.support_max, **self.metadata}


def zero_spectrum(k_max: float = 1.0) -> PowerSpectrum:
    return PowerSpectrum(lambda k: np.zeros_like(k), k_max, "zero", 0.0, {"kind": "zero"})


def gaussian_spectrum(variance: float, center: float, width: float) -> PowerSpectrum:
    """Gaussian ``variance/(width sqrt(pi)) exp(-((k-center)/width)^2)`` cut at ``center +- 8 width``.

    The cut drops a relative tail of ``erfc(8) ~ 1e-29``, and the lower cut is
    clipped at 0.
    """
    if not width > 0:
        raise SpectrumError(f"width must be positive, got {width}")
    if not center > 0:
        raise SpectrumError(f"center must be positive, got {center}")
    if variance < 0:
        raise SpectrumError(f"variance must be nonnegative, got {variance}")
    peak = variance / (width * math.sqrt(math.pi))

    def s(k):
        return peak * np.exp(-(((k - center) / width) ** 2))

    return PowerSpectrum(
        s, center + 8.0 * width, f"gaussian(var={variance:g}, k0={center:g}, w={width:g})",
        max(0.0, center - 8.0 * width),
        {"kind": "gaussian", "variance": variance, "center": center, "width": width},
    )


def _jonswap_radian(kr, alpha, gamma, kpr):
    # deep-water JONSWAP, S(omega) mapped to radian wavenumber via omega^2 = g k; g cancels
    sigma = np.where(kr <= kpr, 0.07, 0.09)
    r = np.exp(-((np.sqrt(kr) - np.sqrt(kpr)) ** 2) / (2.0 * sigma**2 * kpr))
    return alpha / (2.0 * kr**3) * np.exp(-1.25 * (kpr / kr) ** 2) * gamma**r


def jonswap_spectrum(alpha: float, gamma: float, peak_wavenumber: float,
                     k_max: float | None = None, cutoff: float = 1e-12) -> PowerSpectrum:
    """JONSWAP spectrum in wavenumber space (cycles per unit length).

    The frequency form ``alpha g^2 w^-5 exp(-5/4 (wp/w)^4) gamma^r`` is mapped
    to radian wavenumber with deep-water dispersion, giving
    ``alpha/(2 kr^3) exp(-5/4 (kpr/kr)^2) gamma^r``, and then to cycles via
    ``S(k) = 2 pi S_r(2 pi k)``.

    Support ends are placed where S drops below ``cutoff`` times its peak.
    Because the upper tail decays only like k^-3 that default cut is far out;
    pass ``k_max`` explicitly to truncate sooner.
    """
    if gamma < 1:
        raise SpectrumError(f"gamma must be >= 1, got {gamma}")
    if alpha < 0:
        raise SpectrumError(f"alpha must be nonnegative, got {alpha}")
    if not peak_wavenumber > 0:
        raise SpectrumError("peak_wavenumber must be positive")
    kpr = 2.0 * math.pi * peak_wavenumber

    def s(k):
        k = np.asarray(k, dtype=float)
        out = np.zeros(k.shape)
        pos = k > 0
        out[pos] = 2.0 * math.pi * _jonswap_radian(2.0 * math.pi * k[pos], alpha, gamma, kpr)
        return out

    meta = {"kind": "jonswap", "alpha": alpha, "gamma": gamma,
            "peak_wavenumber": peak_wavenumber, "cutoff": cutoff}
    if alpha == 0:
        return PowerSpectrum(s, k_max or peak_wavenumber, "jonswap(alpha=0)", 0.0, meta)

    # the unit-alpha shape peaks close to (not exactly at) kp
    shape = lambda k: float(s(np.array([k]))[0]) / alpha  # noqa: E731
    res = optimize.minimize_scalar(lambda k: -shape(k),
                                   bounds=(0.5 * peak_wavenumber, 1.5 * peak_wavenumber),
                                   method="bounded", options={"xatol": 1e-12})
    k_peak, s_peak = float(res.x), -float(res.fun)
    level = cutoff * s_peak
    k_lo = optimize.brentq(lambda k: shape(k) - level, 1e-3 * peak_wavenumber, k_peak)
    meta["k_max_rule"] = "cutoff" if k_max is None else "explicit"
    if k_max is None:
        hi = 2.0 * k_peak
        while shape(hi) > level:
            hi *= 2.0
        k_max = optimize.brentq(lambda k: shape(k) - level, k_peak, hi)
    return PowerSpectrum(s, float(k_max), f"jonswap(alpha={alpha:g}, gamma={gamma:g}, "
                         f"kp={peak_wavenumber:g})", min(k_lo, float(k_max)), meta)


def from_radian_spectrum(s_radian: Callable, k_max_radian: float, label: str = "") -> PowerSpectrum:
    """Wrap a density given per radian wavenumber as a cycles-per-length spectrum."""
    two_pi = 2.0 * math.pi
    return PowerSpectrum(lambda k: two_pi * np.asarray(s_radian(two_pi * k)),
                         k_max_radian / two_pi, label or "radian-converted")


def tabulated_spectrum(k, s, label: str = "tabulated") -> PowerSpectrum:
    """Piecewise-linear interpolation of samples, zero outside the table range."""
    k = np.asarray(k, dtype=float)
    s = np.asarray(s, dtype=float)
    if k.ndim != 1 or k.shape != s.shape or k.size < 2:
        raise SpectrumError("tabulated spectrum needs matching 1-D arrays of length >= 2")
    if np.any(np.diff(k) <= 0):
        raise SpectrumError("wavenumbers must be strictly increasing")
    if k[0] < 0:
        raise SpectrumError("tabulated wavenumbers must be nonnegative")
    if np.any(s < 0):
        raise SpectrumError("spectral density must be nonnegative")
    kk, ss = k.copy(), s.copy()
    return PowerSpectrum(lambda x: np.interp(x, kk, ss, left=0.0, right=0.0),
                         float(k[-1]), label, float(k[0]),
                         {"kind": "tabulated", "n_samples": int(k.size)})


def load_spectrum_csv(path) -> PowerSpectrum:
    """Load a two-column ``k,S`` CSV with a header row."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 3:
        raise SpectrumError(f"{path}: need a header and at least two samples")
    try:
        data = np.array([[float(a), float(b)] for a, b, *_ in rows[1:] if a.strip()])
    except ValueError as exc:
        raise SpectrumError(f"{path}: non-numeric entry ({exc})") from exc
    spec = tabulated_spectrum(data[:, 0], data[:, 1], label=f"csv:{path}")
    spec.metadata["path"] = str(path)
    return spec


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Fourier coefficients ``P_n`` of the homogeneous autocorrelation on the torus.

    ``coefficients[n]`` holds ``P_n`` for ``n = 0..m*M``; every other index is
    zero.
    """

    coefficients: np.ndarray = field(repr=False)
    domain_length: float
    spacing_multiplier: int
    mode_count: int

    @property
    def L(self) -> float:
        return self.domain_length

    @property
    def n_max(self) -> int:
        return self.spacing_multiplier * self.mode_count

    @property
    def variance(self) -> float:
        return float(np.sum(self.coefficients))

    def P(self, n):
        """Vectorized lookup of ``P_n`` for arbitrary integer ``n``."""
        n = np.asarray(n)
        inside = (n >= 0) & (n <= self.n_max)
        return np.where(inside, self.coefficients[np.clip(n, 0, self.n_max)], 0.0)

    def support(self) -> np.ndarray:
        """Indices ``n`` with ``P_n != 0``."""
        return np.flatnonzero(self.coefficients)


def discretize(S: PowerSpectrum, L: float, m: int = 1) -> DiscreteSpectrum:
    """``P_n = (m/L) S(n/L)`` on ``n = m, 2m, ..., mM`` with ``M = floor(k_max L / m)``."""
    if not L > 0:
        raise SpectrumError(f"domain length must be positive, got {L}")
    if int(m) != m or m < 1:
        raise SpectrumError(f"spacing multiplier must be a positive integer, got {m}")
    m = int(m)
    M = int(math.floor(S.support_max * L / m + 1e-9))
    coeffs = np.zeros(m * M + 1)
    if M >= 1:
        n = m * np.arange(1, M + 1)
        coeffs[n] = (m / L) * S(n / L)
    return DiscreteSpectrum(coeffs, float(L), m, M)


def autocorrelation(D: DiscreteSpectrum, x):
    """``Gamma(x) = sum_n P_n exp(2 pi i x n / L)``."""
    n = D.support()
    x = np.asarray(x, dtype=float)
    phase = np.exp(2j * np.pi * np.multiply.outer(x, n) / D.L)
    return phase @ D.coefficients[n]
