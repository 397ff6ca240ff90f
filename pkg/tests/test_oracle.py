import numpy as np
import pytest

from alberlab.alber import (KernelParams, block_eigenvalues, block_matrix,
                            detect_instability_contour, eigenvalue_oracle, h_tilde_L,
                            required_truncation)
from alberlab.spectrum import discretize, gaussian_spectrum, zero_spectrum

NARROW = gaussian_spectrum(1.0, 1.0, 0.02)
XIS = [x for x in range(-50, 51) if 40 <= abs(x) <= 50]


def test_q_zero_spectrum_is_imaginary():
    kp = KernelParams(1.0, 0.0, discretize(NARROW, 100.0))
    v = eigenvalue_oracle(kp, xi_range=range(-10, 11))
    assert not v.unstable
    K = required_truncation(kp, [7])
    assert np.max(np.abs(block_eigenvalues(7, kp, K).real)) == 0


def test_zero_spectrum_stable():
    kp = KernelParams(1.0, 1.0, discretize(zero_spectrum(2.0), 50.0))
    assert eigenvalue_oracle(kp, xi_range=range(-5, 6)).status == "stable"


def test_truncation_must_cover_support():
    kp = KernelParams(1.0, 1.0, discretize(NARROW, 50.0))
    need = required_truncation(kp, [3])
    with pytest.raises(ValueError):
        eigenvalue_oracle(kp, K_trunc=need - 1, xi_range=[3])


def test_block_structure():
    kp = KernelParams(1.0, 1.0, discretize(NARROW, 50.0))
    k, A = block_matrix(4, kp, 60)
    off = A - np.diag(np.diag(A))
    # rank-one coupling: every column of the off-diagonal part repeats the same vector
    b = np.diag(A) - np.diag(A).real * 0 - (-1j * 2 * np.pi**2 / 50**2 * (k**2 - (4 - k) ** 2))
    np.testing.assert_allclose(off + np.diag(b), np.outer(b, np.ones(k.size)), atol=1e-15)


def test_coupled_eigenvalues_are_kernel_roots():
    kp = KernelParams(1.0, 1.0, discretize(NARROW, 200.0))
    ev = block_eigenvalues(45, kp, required_truncation(kp, [45]))
    pos = ev[ev.real > 1e-8]
    assert pos.size >= 1
    for w in pos:
        assert abs(h_tilde_L(45, w, kp) - 1) < 1e-8


def test_agrees_with_contour_and_is_truncation_converged():
    kp = KernelParams(1.0, 1.0, discretize(NARROW, 200.0))
    v = detect_instability_contour(kp, xi_range=XIS)
    o1 = eigenvalue_oracle(kp, xi_range=XIS)
    o2 = eigenvalue_oracle(kp, K_trunc=2 * o1.parameters["K_trunc"], xi_range=XIS)
    assert v.unstable and o1.unstable and o2.unstable
    g = v.max_growth_rate
    assert abs(o2.diagnostics["max_real_eigenvalue"] - g) <= 0.1 * g
    assert o2.max_growth_rate == pytest.approx(o1.max_growth_rate, rel=1e-10)
    assert len(o1.witnesses) == sum(v.winding_numbers.values())
