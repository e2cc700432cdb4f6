"""Auxiliary density estimators: Gaussian KDE with SJ bandwidth, wavelet linear."""

import numpy as np
import pytest

from biaswave.auxdensity import (
    KernelDensityEstimate,
    fit_kde,
    kde_eval,
    silverman_bandwidth,
    sj_bandwidth,
    wavelet_density,
)
from biaswave.filters import load_filter


# ------------------------------------------------------------------ bandwidth

def test_sj_rejects_constant_sample():
    with pytest.raises(ValueError):
        sj_bandwidth(np.full(100, 3.0))


def test_sj_rejects_tiny_sample():
    with pytest.raises(ValueError):
        sj_bandwidth(np.arange(5, dtype=float))


def test_sj_within_factor_two_of_silverman():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(1000)
    h_ref = silverman_bandwidth(x)
    assert h_ref == pytest.approx(0.235, abs=0.03)
    h = sj_bandwidth(x)
    assert h_ref / 2.0 < h < h_ref * 2.0


def test_sj_scale_equivariance():
    rng = np.random.default_rng(2)
    x = rng.beta(2.0, 5.0, size=400)
    h = sj_bandwidth(x)
    c = 3.0
    assert abs(sj_bandwidth(c * x) - c * h) / (c * h) < 1e-6


def test_sj_decreases_with_n():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(4000)
    assert sj_bandwidth(x) < sj_bandwidth(x[:250])


# ------------------------------------------------------------------------ KDE

def test_kde_single_point_value():
    kde = KernelDensityEstimate(sample=np.array([0.5]), bandwidth=0.1)
    assert kde_eval(kde, 0.5) == pytest.approx(3.9894, abs=1e-3)


def test_kde_symmetry():
    kde = KernelDensityEstimate(sample=np.array([0.4, 0.6]), bandwidth=0.07)
    for t in (0.05, 0.11, 0.3):
        assert kde_eval(kde, 0.5 - t) == pytest.approx(kde_eval(kde, 0.5 + t), abs=1e-14)


def test_kde_integrates_to_one():
    rng = np.random.default_rng(4)
    kde = fit_kde(rng.uniform(0, 1, 200), bandwidth=0.05)
    ys = np.linspace(-5.0, 6.0, 100001)
    assert np.trapezoid(kde_eval(kde, ys), ys) == pytest.approx(1.0, abs=1e-4)


def test_kde_nonnegative_and_translation_equivariant():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(100)
    kde = fit_kde(x, bandwidth=0.2)
    shifted = fit_kde(x + 2.5, bandwidth=0.2)
    ys = np.linspace(-3, 3, 101)
    a = kde_eval(kde, ys)
    b = kde_eval(shifted, ys + 2.5)
    assert np.all(a >= 0.0)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_kde_requires_positive_bandwidth():
    with pytest.raises(ValueError):
        KernelDensityEstimate(sample=np.array([0.5]), bandwidth=0.0)


# --------------------------------------------------------------- wavelet aux

def test_wavelet_density_level0_is_constant():
    filt = load_filter("haar")
    est = wavelet_density(np.array([0.1, 0.4, 0.9]), filt, 0)
    for y in (0.05, 0.5, 0.95):
        assert est(y) == pytest.approx(1.0, abs=1e-10)


def test_haar_wavelet_density_is_histogram():
    """With the haar filter the level-j estimate equals the dyadic histogram."""
    filt = load_filter("haar")
    sample = np.array([0.1, 0.3, 0.6, 0.9])
    est = wavelet_density(sample, filt, 2)
    # bin counts over [0, .25), [.25, .5), [.5, .75), [.75, 1] are 1,1,1,1
    # for the midpoints query; heights = count / (n * width)
    for y, height in [(0.125, 1.0), (0.375, 1.0), (0.625, 1.0), (0.875, 1.0)]:
        assert est(y) == pytest.approx(height, abs=1e-10)
    sample2 = np.array([0.05, 0.1, 0.6, 0.9])
    est2 = wavelet_density(sample2, filt, 2)
    for y, height in [(0.125, 2.0), (0.375, 0.0), (0.625, 1.0), (0.875, 1.0)]:
        assert est2(y) == pytest.approx(height, abs=1e-10)


def test_wavelet_density_integrates_to_one():
    rng = np.random.default_rng(13)
    sample = rng.beta(0.5, 0.5, size=2000)
    est = wavelet_density(sample, load_filter("sym10"), 4)
    ys = np.linspace(0.0, 1.0, 4097)
    assert np.trapezoid(est(ys), ys) == pytest.approx(1.0, abs=0.02)


def test_wavelet_density_level_guard():
    with pytest.raises(ValueError):
        wavelet_density(np.array([0.1, 0.2, 0.3]), load_filter("haar"), 2)
    with pytest.raises(ValueError):
        wavelet_density(np.array([0.1, 1.2]), load_filter("haar"), 0)
