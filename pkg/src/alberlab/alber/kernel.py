"""Periodized Alber stability kernel, its infinite-line limit, and the Riemann-sum study.

Kernel convention: the NLS ``i u_t + (p/2) u_xx + (q/2)|u|^2 u = 0``. Use
:func:`to_kernel_coefficients` to convert coefficients written for
``i u_t + p u_xx + q|u|^2 u = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate

from ..spectrum import DiscreteSpectrum, PowerSpectrum

TWO_PI_SQ = 2.0 * math.pi**2


class KernelDomainError(ValueError):
    """The kernel is only defined (as a Laplace transform) for Re(omega) > 0."""


def to_kernel_coefficients(p: float, q: float, half_factor_convention: bool) -> tuple[float, float]:
    """Return ``(p, q)`` in the kernel's ``(p/2, q/2)`` convention.

    ``half_factor_convention=True`` means the input coefficients already follow
    the kernel convention; ``False`` means they come from ``p u_xx + q|u|^2 u``
    and are doubled.
    """
    return (p, q) if half_factor_convention else (2.0 * p, 2.0 * q)


@dataclass(frozen=True)
class KernelParams:
    p: float
    q: float
    spectrum: Union[DiscreteSpectrum, PowerSpectrum]

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"dispersion coefficient p must be positive, got {self.p}")
        # q = 0 is allowed as the degenerate linear case
        if self.q < 0:
            raise ValueError(f"nonlinearity coefficient q must be nonnegative, got {self.q}")

    @property
    def discrete(self) -> DiscreteSpectrum:
        if not isinstance(self.spectrum, DiscreteSpectrum):
            raise TypeError("this operation needs a DiscreteSpectrum")
        return self.spectrum


def _check_omega(omega):
    omega = np.asarray(omega, dtype=complex)
    if np.any(omega.real <= 0):
        raise KernelDomainError("kernel requires Re(omega) > 0")
    return omega


def active_modes(D: DiscreteSpectrum, xi: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices ``k`` where ``P_{k-xi} - P_k`` can be nonzero, and those numerators.

    Compact support makes this the exact index set of the kernel sum.
    """
    supp = D.support()
    k = np.union1d(supp, supp + int(xi))
    numer = D.P(k - xi) - D.P(k)
    keep = numer != 0
    return k[keep], numer[keep]


def pole_frequencies(xi: int, k: np.ndarray, p: float, L: float) -> np.ndarray:
    """``2 pi^2 p xi (2k - xi) / L^2``: the kernel has poles at ``omega = -i`` times these."""
    return TWO_PI_SQ * p * xi * (2.0 * k - xi) / L**2


def _kernel_sum(xi, omega, kp, L, power=1, chunk=4096):
    D = kp.discrete
    if L is None:
        L = D.L
    elif not math.isclose(L, D.L, rel_tol=1e-12):
        raise ValueError(f"L={L} does not match the discretization length {D.L}")
    omega = np.asarray(omega, dtype=complex)
    xi = int(xi)
    if xi == 0 or kp.q == 0:
        return np.zeros(omega.shape, dtype=complex)
    k, numer = active_modes(D, xi)
    if k.size == 0:
        return np.zeros(omega.shape, dtype=complex)
    d = 1j * pole_frequencies(xi, k, kp.p, L)
    flat = omega.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for s in range(0, flat.size, chunk):
        w = flat[s:s + chunk, None] + d[None, :]
        out[s:s + chunk] = (numer[None, :] / w**power).sum(axis=1)
    return (1j * kp.q * out).reshape(omega.shape)


def h_tilde_L(xi: int, omega, kp: KernelParams, L: float | None = None):
    """Periodized kernel ``i q sum_k (P_{k-xi} - P_k) / (omega + i p 2 pi^2 xi (2k - xi) / L^2)``.

    With ``m = 1`` discretization ``P_n = S(n/L)/L`` this is the closed form in
    terms of S. ``omega`` may be an array.
    """
    omega = _check_omega(omega)
    return _kernel_sum(xi, omega, kp, L)


def h_tilde_L_derivative(xi: int, omega, kp: KernelParams, L: float | None = None):
    """``d h_tilde_L / d omega``."""
    omega = _check_omega(omega)
    return -_kernel_sum(xi, omega, kp, L, power=2)


def h_infinity(X: float, omega: complex, p: float, q: float, S: PowerSpectrum,
               epsabs: float = 1e-10) -> complex:
    """Infinite-line kernel ``i q int (S(k - X/2) - S(k + X/2)) / (omega + 4 pi^2 i p k X) dk``.

    The two shifted spectra are integrated separately over their own supports.
    """
    omega = complex(omega)
    if omega.real <= 0:
        raise KernelDomainError("kernel requires Re(omega) > 0")
    if X == 0 or q == 0 or S.support_max == S.support_min:
        return 0j
    a, b = S.support_min, S.support_max
    c = 4.0 * math.pi**2 * p * X

    def piece(shift):
        # substitute k = s - shift so the spectrum argument is s
        lo, hi = a, b
        # Lorentzian peak of 1/(omega + i c k) sits at k = -Im(omega)/c
        k_star = -omega.imag / c
        s_star = k_star + shift
        pts = [s_star] if lo < s_star < hi else None

        def f(s):
            return S(s) / (omega + 1j * c * (s - shift))

        re, _ = integrate.quad(lambda s: f(s).real, lo, hi, points=pts, epsabs=epsabs / 4,
                               epsrel=1e-12, limit=1000)
        im, _ = integrate.quad(lambda s: f(s).imag, lo, hi, points=pts, epsabs=epsabs / 4,
                               epsrel=1e-12, limit=1000)
        return complex(re, im)

    # S(k - X/2): s = k - X/2 -> k = s + X/2 ; S(k + X/2): k = s - X/2
    return 1j * q * (piece(-X / 2) - piece(X / 2))


def h_delta_spectrum(X: float, omega, p: float, q: float, variance: float, center: float):
    """Closed form of :func:`h_infinity` for ``S = variance * delta(k - center)``.

    Both shifted deltas give simple fractions; with ``a = 4 pi^2 p X center`` and
    ``b = 2 pi^2 p X^2`` the result is ``2 q variance b / ((omega + i a)^2 + b^2)``.
    """
    omega = np.asarray(omega, dtype=complex)
    a = 4.0 * math.pi**2 * p * X * center
    b = TWO_PI_SQ * p * X**2
    return 2.0 * q * variance * b / ((omega + 1j * a) ** 2 + b**2)


def riemann_convergence_study(S: PowerSpectrum, X: float, omega: complex, p: float, q: float,
                              L_list, m: int = 1) -> list[dict]:
    """Distance between ``h_tilde_L(round(X L), omega)`` and ``h_infinity(X, omega)`` per L."""
    from ..spectrum import discretize

    _check_omega(omega)
    target = h_infinity(X, omega, p, q, S)
    rows = []
    for L in L_list:
        if not L > 0:
            raise ValueError("all domain lengths must be positive")
        xi = int(round(X * L))
        kp = KernelParams(p, q, discretize(S, L, m))
        hl = complex(h_tilde_L(xi, omega, kp)) if xi != 0 else 0j
        rows.append({"L": float(L), "xi": xi, "h_L": hl, "h_inf": target,
                     "error": abs(hl - target)})
    return rows
