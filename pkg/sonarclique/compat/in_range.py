"""
Pairwise length in-range test.

Two sonar measurements constrain the distance between the 3D points that produced
them to a feasible interval, because the only missing coordinate (elevation) is
bounded by the elevation aperture. Bounded measurement noise widens the interval.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from sonarclique.compat.graphs import CompatibilityGraph
from sonarclique.compat.segments import segment_max_distance_batch, segment_min_distance_batch
from sonarclique.config.models import PHI_MAX_LIMIT, SonarConfig
from sonarclique.errors import BoundsError
from sonarclique.geometry.sonar import Correspondence, Measurement, correspondences_to_arrays

logger = logging.getLogger(__name__)

MIN_RANGE = 1e-9
PAIR_CHUNK = 65536


class FeasibleInterval(NamedTuple):
    lo: float
    hi: float

    def contains(self, length: float) -> bool:
        return self.lo <= length <= self.hi


def _check_ranges(*ranges: np.ndarray) -> None:
    for r in ranges:
        if np.any(np.asarray(r) <= 0.0):
            raise ValueError("ranges must be positive")


def length_bounds_noiseless_batch(
        r_i: np.ndarray,
        theta_i: np.ndarray,
        r_j: np.ndarray,
        theta_j: np.ndarray,
        phi_max: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Feasible interval of the 3D distance between two noiseless returns.

    The squared length is ``r_i^2 + r_j^2 - 2 r_i r_j X`` with ``X`` the cosine-like
    term; it is evaluated as ``(r_i - r_j)^2 + 2 r_i r_j (1 - X)`` so that equal
    bearings give ``|r_i - r_j|`` exactly.
    """
    r_i, theta_i, r_j, theta_j = (np.asarray(x, dtype=float) for x in (r_i, theta_i, r_j, theta_j))
    half = 0.5 * (theta_i - theta_j)
    s2 = np.sin(half) ** 2
    c2 = np.cos(half) ** 2
    # 1 - X_min and 1 - X_max
    gap_lo = 2.0 * s2 * np.cos(phi_max) ** 2
    gap_hi = 2.0 * s2 + 2.0 * c2 * np.sin(phi_max) ** 2

    base = (r_i - r_j) ** 2
    lo = np.sqrt(np.maximum(base + 2.0 * r_i * r_j * gap_lo, 0.0))
    hi = np.sqrt(np.maximum(base + 2.0 * r_i * r_j * gap_hi, 0.0))
    return lo, hi


def length_bounds_noiseless(m_i: Measurement, m_j: Measurement, phi_max: float) -> FeasibleInterval:
    _check_ranges(m_i.r, m_j.r)
    if not 0.0 < phi_max <= PHI_MAX_LIMIT:
        raise ValueError("phi_max must lie in (0, 10] degrees")
    lo, hi = length_bounds_noiseless_batch(m_i.r, m_i.theta, m_j.r, m_j.theta, phi_max)
    return FeasibleInterval(float(lo), float(hi))


def _ray_segments(r: np.ndarray, beta_r: float, direction: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    near = np.maximum(r - beta_r, MIN_RANGE)
    far = r + beta_r
    return near[..., None] * direction, far[..., None] * direction


def length_bounds_noisy_batch(
        r_i: np.ndarray,
        theta_i: np.ndarray,
        r_j: np.ndarray,
        theta_j: np.ndarray,
        cfg: SonarConfig,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Feasible interval widened for bounded range and bearing noise.

    The bearing difference is widened to ``[|d| - 2 beta_theta, |d| + 2 beta_theta]``;
    the extreme difference fixes a virtual angle ``alpha`` between two rays, the
    noisy ranges become segments of length ``2 beta_r`` on those rays, and the
    interval endpoints are the minimum and maximum distances between the segments.

    Returns ``(lo, hi, valid)``; ``valid`` is false where ``|d| + 2 beta_theta >= pi``
    and the expansion is undefined.
    """
    r_i, theta_i, r_j, theta_j = (np.asarray(x, dtype=float) for x in (r_i, theta_i, r_j, theta_j))
    delta = np.abs(np.angle(np.exp(1j * (theta_i - theta_j))))
    valid = delta + 2.0 * cfg.beta_theta < np.pi

    delta_near = np.maximum(delta - 2.0 * cfg.beta_theta, 0.0)
    delta_far = np.minimum(delta + 2.0 * cfg.beta_theta, np.pi)
    sin_phi2 = np.sin(cfg.phi_max) ** 2
    cos_phi = np.cos(cfg.phi_max)

    # sin(alpha/2) from 1 - cos(alpha) = 1 - X*
    alpha_lo = 2.0 * np.arcsin(np.clip(np.abs(np.sin(0.5 * delta_near)) * cos_phi, 0.0, 1.0))
    alpha_hi = 2.0 * np.arcsin(np.sqrt(np.clip(
        np.sin(0.5 * delta_far) ** 2 + np.cos(0.5 * delta_far) ** 2 * sin_phi2, 0.0, 1.0)))

    ray = np.array([1.0, 0.0])
    a_i, b_i = _ray_segments(r_i, cfg.beta_r, np.broadcast_to(ray, r_i.shape + (2,)))

    dir_lo = np.stack([np.cos(alpha_lo), np.sin(alpha_lo)], axis=-1)
    a_j, b_j = _ray_segments(r_j, cfg.beta_r, dir_lo)
    lo = segment_min_distance_batch(a_i, b_i, a_j, b_j)

    dir_hi = np.stack([np.cos(alpha_hi), np.sin(alpha_hi)], axis=-1)
    a_j, b_j = _ray_segments(r_j, cfg.beta_r, dir_hi)
    hi = segment_max_distance_batch(a_i, b_i, a_j, b_j)

    return lo, hi, valid


def length_bounds_noisy(m_i: Measurement, m_j: Measurement, cfg: SonarConfig) -> FeasibleInterval:
    _check_ranges(m_i.r, m_j.r)
    lo, hi, valid = length_bounds_noisy_batch(
        np.array([m_i.r]), np.array([m_i.theta]), np.array([m_j.r]), np.array([m_j.theta]), cfg)
    if not valid[0]:
        raise BoundsError()
    return FeasibleInterval(float(lo[0]), float(hi[0]))


def in_range_batch(
        world_i: np.ndarray,
        r_i: np.ndarray,
        theta_i: np.ndarray,
        world_j: np.ndarray,
        r_j: np.ndarray,
        theta_j: np.ndarray,
        cfg: SonarConfig,
) -> np.ndarray:
    """Vectorised in-range test; pairs outside the expansion's domain are accepted."""
    length = np.linalg.norm(np.asarray(world_i) - np.asarray(world_j), axis=-1)
    lo, hi, valid = length_bounds_noisy_batch(r_i, theta_i, r_j, theta_j, cfg)
    return ~valid | ((lo <= length) & (length <= hi))


def in_range_test(c_i: Correspondence, c_j: Correspondence, cfg: SonarConfig) -> bool:
    try:
        bounds = length_bounds_noisy(c_i.meas, c_j.meas, cfg)
    except BoundsError:
        return True
    length = float(np.linalg.norm(np.subtract(c_i.world, c_j.world)))
    return bounds.contains(length)


def pairwise_adjacency(
        world: np.ndarray,
        r: np.ndarray,
        theta: np.ndarray,
        cfg: SonarConfig,
        workers: int = 1,
) -> np.ndarray:
    """
    Symmetric boolean matrix of in-range compatible pairs.

    Pairs are evaluated in fixed chunks; the result does not depend on ``workers``.
    """
    n = len(r)
    adjacency = np.zeros((n, n), dtype=bool)
    if n < 2:
        return adjacency

    ii, jj = np.triu_indices(n, k=1)
    chunks = [slice(s, min(s + PAIR_CHUNK, len(ii))) for s in range(0, len(ii), PAIR_CHUNK)]

    def evaluate(chunk: slice) -> np.ndarray:
        i, j = ii[chunk], jj[chunk]
        return in_range_batch(world[i], r[i], theta[i], world[j], r[j], theta[j], cfg)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, chunks))
    else:
        results = [evaluate(chunk) for chunk in chunks]

    passed = np.concatenate(results)
    adjacency[ii[passed], jj[passed]] = True
    adjacency[jj[passed], ii[passed]] = True
    logger.debug("In-range test kept %d of %d pairs", int(passed.sum()), len(passed))
    return adjacency


def build_pairwise_graph(corrs: Sequence[Correspondence], cfg: SonarConfig, workers: int = 1) -> CompatibilityGraph:
    world, r, theta = correspondences_to_arrays(corrs)
    return CompatibilityGraph.from_adjacency(pairwise_adjacency(world, r, theta, cfg, workers))
