import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alberlab.seastate import (AliasingError, GENERATOR, autocorrelation_samples, derive_seeds,
                               discrete_spectrum_of, ensemble_autocorrelation, evaluate, generate,
                               generate_ensemble, grid, sample_on_grid)
from alberlab.spectrum import (SpectrumError, autocorrelation, discretize, gaussian_spectrum,
                               tabulated_spectrum, zero_spectrum)

GAUSS = gaussian_spectrum(1.0, 1.0, 0.1)


def single_bin(L=50.0, level=4.0):
    # nonzero only near k = 1/L, so j = 1 is the only mode with S > 0
    return tabulated_spectrum([0.5 / L, 1.0 / L, 1.5 / L], [0.0, level, 0.0])


def test_zero_spectrum_gives_zero_field():
    r = generate(zero_spectrum(1.0), 20.0, 1, seed=3)
    assert np.all(evaluate(r, np.linspace(-5, 5, 11)) == 0)
    assert np.all(sample_on_grid(r, 64) == 0)


def test_amplitudes_and_wavenumbers():
    r = generate(GAUSS, 100.0, 2, seed=1)
    assert r.spacing_multiplier == 2 and r.generator == GENERATOR
    np.testing.assert_allclose(r.wavenumbers, 0.02 * np.arange(1, r.mode_count + 1))
    np.testing.assert_allclose(r.amplitudes, np.sqrt(0.02 * GAUSS(r.wavenumbers)))
    assert np.all(np.diff(r.wavenumbers) > 0)
    assert np.all((r.phases >= 0) & (r.phases < 1))


def test_single_bin_has_constant_modulus():
    L = 50.0
    r = generate(single_bin(L), L, 1, seed=0)
    v = evaluate(r, np.linspace(-30, 30, 41))
    assert r.amplitudes[0] > 0 and np.all(r.amplitudes[1:] == 0)
    np.testing.assert_allclose(np.abs(v), r.amplitudes[0], rtol=1e-14)
    f = sample_on_grid(r, 16)
    assert np.mean(np.abs(f) ** 2) == pytest.approx(r.amplitudes[0] ** 2, rel=1e-14)


def test_one_mode_matches_formula():
    r = generate(GAUSS, 100.0, 1, seed=5)
    x = np.array([-3.0, 0.25, 17.0])
    j = 99
    single = type(r)(r.amplitudes[j:j + 1], r.wavenumbers[j:j + 1], r.phases[j:j + 1],
                     r.domain_length, 1, r.seed)
    expect = r.amplitudes[j] * np.exp(2j * np.pi * (r.wavenumbers[j] * x + r.phases[j]))
    np.testing.assert_allclose(evaluate(single, x), expect, rtol=1e-13)


def test_fft_matches_direct_sum():
    r = generate(GAUSS, 100.0, 1, seed=11)
    n_x = 512
    err = np.max(np.abs(sample_on_grid(r, n_x) - evaluate(r, grid(100.0, n_x))))
    assert err < 1e-12 * r.amplitudes.sum()


def test_parseval_and_aliasing_guard():
    r = generate(GAUSS, 100.0, 1, seed=2)
    for n_x in (2 * r.mode_count, 1000):
        f = sample_on_grid(r, n_x)
        assert np.mean(np.abs(f) ** 2) == pytest.approx(r.variance, rel=1e-13)
    with pytest.raises(AliasingError):
        sample_on_grid(r, 2 * r.mode_count - 1)


def test_generate_rejects_short_domain():
    with pytest.raises(SpectrumError):
        generate(GAUSS, 0.3, 1)
    with pytest.raises(SpectrumError):
        generate(GAUSS, -1.0, 1)


def test_seed_determinism():
    a, b = generate(GAUSS, 100.0, 1, seed=42), generate(GAUSS, 100.0, 1, seed=42)
    assert np.array_equal(a.phases, b.phases)
    assert np.array_equal(sample_on_grid(a, 400), sample_on_grid(b, 400))
    assert not np.array_equal(a.phases, generate(GAUSS, 100.0, 1, seed=43).phases)


def test_ensemble_seeds_distinct_and_shared_parameters():
    e = generate_ensemble(GAUSS, 100.0, 50, base_seed=7)
    seeds = [r.seed for r in e.realizations]
    assert len(set(seeds)) == 50
    assert np.array_equal(derive_seeds(7, 50), np.array(seeds, dtype=np.uint64))
    assert len({(r.domain_length, r.spacing_multiplier, r.mode_count) for r in e.realizations}) == 1


def test_single_bin_lag_zero_is_exact():
    L = 50.0
    e = generate_ensemble(single_bin(L), L, 20, base_seed=0)
    s = autocorrelation_samples(e, 0.0, x=[1.3])
    A2 = e.realizations[0].amplitudes[0] ** 2
    np.testing.assert_allclose(s, A2, rtol=1e-14)
    assert np.std(s) < 1e-15


def test_grid_averaged_estimator_equals_discrete_autocorrelation():
    # on the alias-free grid, cross terms average out exactly for every realization
    e = generate_ensemble(GAUSS, 100.0, 3, base_seed=1)
    D = discretize(GAUSS, 100.0)
    for lag in (0.0, 0.7, 3.1):
        s = autocorrelation_samples(e, lag)
        np.testing.assert_allclose(s, autocorrelation(D, lag), atol=1e-12)
    assert discrete_spectrum_of(e.realizations[0]).variance == pytest.approx(D.variance, rel=1e-14)


def test_monte_carlo_mean_power_and_zero_mean():
    e = generate_ensemble(GAUSS, 100.0, 4000, base_seed=2024)
    x0 = np.array([0.37])
    vals = np.array([evaluate(r, x0)[0] for r in e.realizations])
    power = np.abs(vals) ** 2
    se = power.std(ddof=1) / np.sqrt(power.size)
    target = discretize(GAUSS, 100.0).variance
    assert abs(power.mean() - target) < 3 * se
    se_mean = np.sqrt(np.mean(np.abs(vals) ** 2) / vals.size)
    assert abs(vals.mean()) < 3 * se_mean
    assert ensemble_autocorrelation(e, 0.0, x=x0) == pytest.approx(power.mean(), rel=1e-12)


def test_empty_ensemble_rejected():
    with pytest.raises(ValueError):
        autocorrelation_samples(generate_ensemble(GAUSS, 100.0, 0), 0.0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**63 - 1), L=st.floats(20, 150), m=st.integers(1, 3))
def test_parseval_property(seed, L, m):
    r = generate(GAUSS, L, m, seed)
    f = sample_on_grid(r, 2 * m * r.mode_count + 6)
    assert np.mean(np.abs(f) ** 2) == pytest.approx(r.variance, rel=1e-12, abs=1e-15)
