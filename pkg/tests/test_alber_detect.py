import json
import math

import numpy as np
import pytest

from alberlab.alber import (ContourSpec, KernelParams, StabilityVerdict, Witness,
                            default_xi_range, detect_instability_contour,
                            detect_instability_gridscan, h_tilde_L, image_curve, refine_root,
                            winding_number)
from alberlab.nlssim import linear_mi_analysis
from alberlab.spectrum import discretize, gaussian_spectrum, zero_spectrum

NARROW = gaussian_spectrum(1.0, 1.0, 0.02)
BAND_EDGE = math.sqrt(2.0) / (2 * math.pi)  # sigma sqrt(2q/p) / (2 pi) with sigma = p = q = 1
NEAR_EDGE = [x for x in range(-52, 53) if 38 <= abs(x) <= 52]


@pytest.fixture(scope="module")
def narrow_kp():
    return KernelParams(1.0, 1.0, discretize(NARROW, 200.0))


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(epsilon=0)
    with pytest.raises(ValueError):
        ContourSpec(n_line=8)


def test_q_zero_and_zero_spectrum_are_stable():
    kp = KernelParams(1.0, 0.0, discretize(NARROW, 100.0))
    v = detect_instability_contour(kp, xi_range=range(-20, 21))
    assert v.status == "stable" and not v.unstable
    assert set(v.winding_numbers.values()) == {0}
    assert detect_instability_gridscan(kp, xi_range=range(-5, 6)).diagnostics["n_candidates"] == 0
    kz = KernelParams(1.0, 1.0, discretize(zero_spectrum(2.0), 100.0))
    assert default_xi_range(kz) == []
    assert detect_instability_contour(kz, xi_range=range(-5, 6)).status == "stable"


def test_narrow_gaussian_unstable_near_mi_band(narrow_kp):
    v = detect_instability_contour(narrow_kp, xi_range=NEAR_EDGE)
    assert v.unstable and v.status == "unstable"
    w = v.strongest_witness()
    X = abs(w.xi) / 200.0
    assert abs(X - BAND_EDGE) <= 0.2 * BAND_EDGE
    assert w.residual < 1e-10 and w.omega.real > 0
    # the same variance as a plane-wave amplitude is modulationally unstable at that scale
    rep = linear_mi_analysis(0.5, 0.5, 1.0, 200.0, 60)
    assert abs(w.xi) in [abs(n) for n in rep.unstable_modes]
    assert sum(v.winding_numbers.values()) == len(v.witnesses)


def test_winding_number_stable_under_resolution(narrow_kp):
    base = ContourSpec()
    fine = ContourSpec(n_line=2 * base.n_line, n_arc=2 * base.n_arc)
    for xi in (10, 45, 60):
        assert winding_number(xi, narrow_kp, base)[0] == winding_number(xi, narrow_kp, fine)[0]


def test_witness_solves_kernel_equation(narrow_kp):
    v = detect_instability_contour(narrow_kp, xi_range=[45])
    for w in v.witnesses:
        assert abs(h_tilde_L(w.xi, w.omega, narrow_kp) - 1) < 1e-10


def test_refine_root_from_nearby_start(narrow_kp):
    v = detect_instability_contour(narrow_kp, xi_range=[40])
    w0 = v.witnesses[0].omega
    w, res, ok = refine_root(40, w0 * (1 + 1e-3), narrow_kp)
    assert ok and abs(w - w0) < 1e-8 and res < 1e-10


def test_gridscan_finds_refined_candidates(narrow_kp):
    g = detect_instability_gridscan(narrow_kp, xi_range=[44, 45, 46])
    assert g.unstable and min(w.residual for w in g.witnesses) < 1e-8
    with pytest.raises(ValueError):
        detect_instability_gridscan(narrow_kp, xi_range=[45], omega_grid=([-1.0, 1.0], [0.0]))


def test_gridscan_broad_weak_spectrum_has_no_candidates():
    kp = KernelParams(1.0, 1.0, discretize(gaussian_spectrum(1e-4, 1.0, 0.3), 50.0))
    g = detect_instability_gridscan(kp)
    assert not g.unstable and g.diagnostics["n_candidates"] == 0
    assert detect_instability_contour(kp).status == "stable"


def test_image_curve_shape(narrow_kp):
    c = image_curve(45, narrow_kp)
    assert c.shape[1] == 4 and np.all(c[:, 0] > 0)


def test_verdict_json_round_trip(narrow_kp):
    v = detect_instability_contour(narrow_kp, xi_range=[45, -45])
    back = StabilityVerdict.from_json(json.loads(v.dumps()))
    assert back.unstable == v.unstable and back.winding_numbers == v.winding_numbers
    assert back.strongest_witness().omega == pytest.approx(v.strongest_witness().omega)
    with pytest.raises(ValueError):
        StabilityVerdict(False, "guess", "stable")
    assert Witness(3, 1 + 2j, 0.0).to_json()["omega"] == [1.0, 2.0]


def test_marginal_status_when_tolerance_exceeds_distance(narrow_kp):
    # a stable block reported with an absurd marginal tolerance is flagged, not decided
    v = detect_instability_contour(narrow_kp, xi_range=[80], marginal_tol=10.0)
    assert v.status == "marginal" and not v.unstable and not v.decided
