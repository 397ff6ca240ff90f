import math

import numpy as np
import pytest

from alberlab.alber import KernelParams, active_modes, reconstruct_r
from alberlab.spectrum import discretize, gaussian_spectrum

KP = KernelParams(1.0, 1.0, discretize(gaussian_spectrum(1.0, 1.0, 0.1), 100.0))


def test_zero_forcing_zero_state():
    t = np.linspace(0, 1, 11)
    _, r = reconstruct_r(5, t, np.zeros_like(t), KP)
    assert np.all(r == 0)


def test_free_evolution_keeps_modulus():
    kp = KernelParams(1.0, 0.0, KP.spectrum)
    t = np.linspace(0, 3, 31)
    k = np.array([90, 100, 110])
    r0 = np.array([1.0, 0.5j, -2.0])
    _, r = reconstruct_r(5, t, np.exp(t), kp, r0=r0, k=k)
    np.testing.assert_allclose(np.abs(r), np.broadcast_to(np.abs(r0), r.shape), rtol=1e-14)


def test_manufactured_exponential_forcing():
    lam = 0.4 + 0.3j
    xi = 5
    h = 1e-3
    t = np.arange(0, 2 + h / 2, h)
    k, r = reconstruct_r(xi, t, np.exp(lam * t), KP)
    d = 2 * math.pi**2 * xi * (2 * k - xi) / 100.0**2
    b = 1j * (KP.discrete.P(k - xi) - KP.discrete.P(k))
    exact = b * (np.exp(lam * t[:, None]) - np.exp(-1j * d * t[:, None])) / (1j * d + lam)
    rel = np.max(np.abs(r - exact)) / np.max(np.abs(exact))
    assert rel < 1e-6
    assert np.array_equal(k, active_modes(KP.discrete, xi)[0])


def test_input_validation():
    t = np.linspace(0, 1, 5)
    with pytest.raises(ValueError):
        reconstruct_r(5, t + 0.1, np.zeros(5), KP)
    with pytest.raises(ValueError):
        reconstruct_r(5, t, np.zeros(4), KP)
    with pytest.raises(ValueError):
        reconstruct_r(5, t, np.zeros(5), KP, r0=np.zeros(2), k=[1, 2, 3])
