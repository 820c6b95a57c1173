"""
Accuracy of the Gaussian approximation of an elevation-marginalised range reading.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.stats import norm

from sonarclique.compat.coplanarity import RApprox, r_approx
from sonarclique.config.models import SonarConfig

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
DEFAULT_BINS = 60
# histogram support in units of the fitted standard deviation
SUPPORT = 5.0


class Histogram(NamedTuple):
    edges: np.ndarray
    density: np.ndarray


class RDistribution(NamedTuple):
    histogram: Histogram
    gaussian_fit: RApprox
    tv_distance: float


def sample_range_readings(
        r: float,
        sigma_r: float,
        phi_max: float,
        n_samples: int,
        rng: np.random.Generator,
) -> np.ndarray:
    """Readings ``r cos(phi) + eta`` with ``phi`` uniform in the elevation aperture."""
    phi = rng.uniform(-phi_max, phi_max, size=n_samples)
    eta = rng.normal(0.0, sigma_r, size=n_samples)
    return r * np.cos(phi) + eta


def r_distribution_study(
        r: float,
        sigma_r: float,
        phi_max: float,
        n_samples: int = 200_000,
        rng: Optional[np.random.Generator] = None,
        bins: int = DEFAULT_BINS,
) -> RDistribution:
    """
    Compares the empirical distribution of range readings with its Gaussian fit.

    The total-variation distance is computed on a common binning of
    ``mu +- 5 sigma`` plus the two tails, so probability mass outside the
    histogram is accounted for on both sides.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    rng = rng if rng is not None else np.random.default_rng()

    fit = r_approx(r, SonarConfig(sigma_r=sigma_r, phi_max=phi_max))
    samples = sample_range_readings(r, sigma_r, phi_max, n_samples, rng)

    edges = np.linspace(fit.mu_est - SUPPORT * fit.sigma_est, fit.mu_est + SUPPORT * fit.sigma_est, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    empirical = counts / n_samples
    tails_empirical = np.array([np.mean(samples < edges[0]), np.mean(samples > edges[-1])])

    cdf = norm.cdf(edges, loc=fit.mu_est, scale=fit.sigma_est)
    gaussian = np.diff(cdf)
    tails_gaussian = np.array([cdf[0], 1.0 - cdf[-1]])

    tv = 0.5 * (np.abs(empirical - gaussian).sum() + np.abs(tails_empirical - tails_gaussian).sum())
    density = empirical / np.diff(edges)
    logger.debug("r=%.3g sigma_r=%.3g phi_max=%.3g: tv=%.4f", r, sigma_r, phi_max, tv)
    return RDistribution(Histogram(edges, density), fit, float(tv))
