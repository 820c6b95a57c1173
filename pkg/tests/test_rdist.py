import math

import numpy as np
import pytest

from sonarclique.sim.rdist import MIN_SAMPLES, r_distribution_study, sample_range_readings


def test_gaussian_fit_is_close_at_typical_range():
    result = r_distribution_study(2.2, 0.005, math.radians(7.0), rng=np.random.default_rng(0))
    assert result.gaussian_fit.mu_est == pytest.approx(2.2 * math.sin(math.radians(7.0)) / math.radians(7.0))
    assert result.gaussian_fit.sigma_est == pytest.approx(0.00699, abs=5e-5)
    assert result.tv_distance <= 0.05


def test_fit_degrades_at_long_range_and_wide_aperture():
    near = r_distribution_study(2.2, 0.005, math.radians(7.0), rng=np.random.default_rng(1))
    far = r_distribution_study(7.0, 0.005, math.radians(10.0), rng=np.random.default_rng(1))
    assert far.tv_distance > 0.15
    assert far.tv_distance > near.tv_distance


def test_narrow_aperture_is_gaussian():
    result = r_distribution_study(2.2, 0.005, 1e-4, rng=np.random.default_rng(2))
    assert result.tv_distance < 0.02
    assert result.gaussian_fit.sigma_est == pytest.approx(0.005, rel=1e-3)


def test_histogram_shape():
    result = r_distribution_study(2.2, 0.005, math.radians(7.0), n_samples=MIN_SAMPLES,
                                  rng=np.random.default_rng(3), bins=40)
    assert result.histogram.edges.shape == (41,)
    assert result.histogram.density.shape == (40,)
    mass = (result.histogram.density * np.diff(result.histogram.edges)).sum()
    assert 0.95 < mass <= 1.0


def test_too_few_samples():
    with pytest.raises(ValueError, match="at least"):
        r_distribution_study(2.2, 0.005, math.radians(7.0), n_samples=MIN_SAMPLES - 1)


def test_readings_never_exceed_range_without_noise(rng):
    samples = sample_range_readings(3.0, 0.0, math.radians(7.0), 1000, rng)
    assert samples.max() <= 3.0
    assert samples.min() >= 3.0 * math.cos(math.radians(7.0))
