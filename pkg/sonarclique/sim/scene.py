"""
Synthetic scenes: sonar-frame points inside a box and the field of view, their
noisy measurements, and world points obtained through a random rigid pose.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from sonarclique.config.models import Box, ScenarioConfig, SonarConfig
from sonarclique.errors import SceneGenerationError
from sonarclique.geometry.sonar import (
    Correspondence,
    Pose,
    add_noise_batch,
    arrays_to_correspondences,
    correspondences_to_arrays,
    in_fov_batch,
    project_batch,
)

logger = logging.getLogger(__name__)

MAX_CONSECUTIVE_REJECTIONS = 100_000
SAMPLE_BATCH = 1024


class Plane(NamedTuple):
    """Plane through ``anchor`` with unit ``normal``; ``basis`` (3, 2) spans it."""
    anchor: np.ndarray
    normal: np.ndarray
    basis: np.ndarray

    @property
    def tilt(self) -> float:
        """Angle between the plane and the sonar xy-plane."""
        return float(np.arccos(np.clip(abs(self.normal[2]), 0.0, 1.0)))

    def distance(self, points: np.ndarray) -> np.ndarray:
        return np.abs((np.atleast_2d(points) - self.anchor) @ self.normal)


@dataclass(frozen=True)
class Scene:
    corrs: List[Correspondence]
    gt_pose: Pose
    inlier_mask: np.ndarray
    sonar_points: np.ndarray
    plane: Optional[Plane] = None


def _rejection_sample(
        draw: Callable[[int], np.ndarray],
        accept: Callable[[np.ndarray], np.ndarray],
        n: int,
) -> np.ndarray:
    kept: List[np.ndarray] = []
    count = 0
    failures = 0
    while count < n:
        batch = draw(SAMPLE_BATCH)
        ok = accept(batch)
        if not ok.any():
            failures += SAMPLE_BATCH
            if failures >= MAX_CONSECUTIVE_REJECTIONS:
                raise SceneGenerationError()
            continue
        failures = 0
        accepted = batch[ok][: n - count]
        kept.append(accepted)
        count += len(accepted)
    return np.concatenate(kept)


def _in_box(points: np.ndarray, box: Box) -> np.ndarray:
    return np.all((points >= np.asarray(box.lo)) & (points <= np.asarray(box.hi)), axis=1)


def sample_box_fov(box: Box, sonar: SonarConfig, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform in the intersection of ``box`` and the field of view."""
    return _rejection_sample(lambda k: box.sample(rng, k), lambda p: in_fov_batch(p, sonar), n)


def random_plane(cfg: ScenarioConfig, rng: np.random.Generator) -> Plane:
    """
    Plane through an anchor at zero height whose tilt against the xy-plane is
    drawn from ``plane_tilt_range`` and whose tilt azimuth is uniform.
    """
    (x_lo, x_hi), (y_lo, y_hi) = cfg.plane_anchor_box
    anchor = np.array([rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi), 0.0])
    tilt = rng.uniform(*cfg.plane_tilt_range)
    azimuth = rng.uniform(0.0, 2.0 * np.pi)
    normal = np.array([np.sin(tilt) * np.cos(azimuth), np.sin(tilt) * np.sin(azimuth), np.cos(tilt)])

    # any vector not parallel to the normal seeds the in-plane basis
    seed = np.array([1.0, 0.0, 0.0]) if abs(normal[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(normal, seed)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return Plane(anchor, normal, np.stack([e1, e2], axis=1))


def sample_plane_box_fov(
        plane: Plane,
        box: Box,
        sonar: SonarConfig,
        n: int,
        rng: np.random.Generator,
) -> np.ndarray:
    """``n`` points uniform on ``plane`` restricted to ``box`` and the field of view."""
    # a disc around the anchor that covers the plane's intersection with the box
    reach = np.linalg.norm(box.corners() - plane.anchor, axis=1).max()

    def draw(k: int) -> np.ndarray:
        coeffs = rng.uniform(-reach, reach, size=(k, 2))
        return plane.anchor + coeffs @ plane.basis.T

    return _rejection_sample(draw, lambda p: _in_box(p, box) & in_fov_batch(p, sonar), n)


def _observe(
        sonar_points: np.ndarray,
        cfg: ScenarioConfig,
        rng: np.random.Generator,
        plane: Optional[Plane],
) -> Scene:
    r, theta = project_batch(sonar_points)
    r_noisy, theta_noisy = add_noise_batch(r, theta, cfg.sonar, rng)
    pose = Pose.random(rng, cfg.translation_range)
    world = pose.inverse().apply(sonar_points)
    corrs = arrays_to_correspondences(world, r_noisy, theta_noisy)
    return Scene(corrs, pose, np.ones(len(corrs), dtype=bool), sonar_points, plane)


def generate_scene_general(cfg: ScenarioConfig, rng: np.random.Generator) -> Scene:
    points = sample_box_fov(cfg.box, cfg.sonar, cfg.n_points, rng)
    logger.debug("Sampled %d general points", len(points))
    return _observe(points, cfg, rng, None)


def generate_scene_coplanar(cfg: ScenarioConfig, rng: np.random.Generator) -> Scene:
    plane = random_plane(cfg, rng)
    points = sample_plane_box_fov(plane, cfg.box, cfg.sonar, cfg.n_points, rng)
    logger.debug("Sampled %d coplanar points (tilt %.1f deg)", len(points), np.degrees(plane.tilt))
    return _observe(points, cfg, rng, plane)


def measurement_region(box: Box, sonar: SonarConfig) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """
    Range and bearing intervals spanned by ``box`` as seen by ``sonar``, clipped
    to the field of view. ``box`` must lie in front of the sonar (``lo[1] > 0``).
    """
    lo, hi = np.asarray(box.lo, dtype=float), np.asarray(box.hi, dtype=float)
    nearest = np.clip(0.0, lo, hi)
    corners = box.corners()
    r_lo = max(float(np.linalg.norm(nearest)), sonar.r_min)
    r_hi = min(float(np.linalg.norm(corners, axis=1).max()), sonar.r_max)
    # bearing extremes of a box in front of the sonar sit on its corners
    bearings = np.arctan2(corners[:, 0], corners[:, 1])
    t_lo = max(float(bearings.min()), -sonar.theta_max)
    t_hi = min(float(bearings.max()), sonar.theta_max)
    return (r_lo, r_hi), (t_lo, t_hi)


def inject_outliers(
        corrs: List[Correspondence],
        ratio: float,
        box: Box,
        pose: Pose,
        cfg: SonarConfig,
        rng: np.random.Generator,
        plane: Optional[Plane] = None,
) -> Tuple[List[Correspondence], np.ndarray]:
    """
    Replaces ``floor(ratio * N)`` correspondences with random pairs.

    The new measurement is the projection of an independent uniform draw from
    ``box`` intersected with the field of view, so it falls inside
    :func:`measurement_region` with the same spread as true measurements. The new
    world point is a uniform draw from ``box`` (or from its intersection with
    ``plane`` and the field of view) mapped to the world frame through ``pose``.
    """
    if not 0.0 <= ratio < 1.0:
        raise ValueError("outlier ratio must lie in [0, 1)")
    n = len(corrs)
    mask = np.ones(n, dtype=bool)
    k = int(np.floor(ratio * n))
    if k == 0:
        return list(corrs), mask

    replaced = np.sort(rng.choice(n, size=k, replace=False))
    r, theta = project_batch(sample_box_fov(box, cfg, k, rng))
    if logger.isEnabledFor(logging.DEBUG):
        (r_lo, r_hi), (t_lo, t_hi) = measurement_region(box, cfg)
        logger.debug("Replacing %d of %d measurements within r [%.3f, %.3f] m, theta [%.1f, %.1f] deg",
                     k, n, r_lo, r_hi, np.degrees(t_lo), np.degrees(t_hi))
    if plane is None:
        sonar_points = box.sample(rng, k)
    else:
        sonar_points = sample_plane_box_fov(plane, box, cfg, k, rng)
    world = pose.inverse().apply(sonar_points)

    world_all, r_all, theta_all = correspondences_to_arrays(corrs)
    world_all[replaced] = world
    r_all[replaced] = r
    theta_all[replaced] = theta
    mask[replaced] = False
    ids = [c.id for c in corrs]
    return arrays_to_correspondences(world_all, r_all, theta_all, ids), mask
