"""
Imaging model of a 2D forward-looking sonar.

Sonar frame: +y is boresight, +x is to the right, +z is up. A point is described by
range ``r``, bearing ``theta`` (from +y towards +x) and elevation ``phi``; the sonar
observes ``(r, theta)`` only.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from sonarclique.config.models import SonarConfig
from sonarclique.errors import DegeneratePointError

_ORTHO_TOL = 1e-10
# slack on the closed angular bounds for points built exactly on them
_ANGLE_TOL = 1e-12


class SphericalPoint(NamedTuple):
    r: float
    theta: float
    phi: float


class Measurement(NamedTuple):
    """A sonar return: range in meters and bearing in radians."""
    r: float
    theta: float

    @property
    def cartesian(self) -> Tuple[float, float]:
        """The ``[u, v] = [r sin(theta), r cos(theta)]`` alias of the measurement."""
        return self.r * np.sin(self.theta), self.r * np.cos(self.theta)


class WorldPoint(NamedTuple):
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


class Correspondence(NamedTuple):
    world: WorldPoint
    meas: Measurement
    id: int


@dataclass(frozen=True)
class Pose:
    """
    Rigid transformation from world to sonar coordinates: ``p_s = R p_w + t``.
    """
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        translation = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(rotation.T @ rotation, np.eye(3), atol=_ORTHO_TOL, rtol=0.0):
            raise ValueError("rotation must be orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > _ORTHO_TOL:
            raise ValueError("rotation must have determinant +1")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def random(cls, rng: np.random.Generator, translation_range: float = 5.0) -> "Pose":
        """Uniformly random rotation and a translation uniform in ``[-range, range]^3``."""
        rotation = Rotation.random(random_state=rng).as_matrix()
        translation = rng.uniform(-translation_range, translation_range, size=3)
        return cls(rotation, translation)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform world points, shape ``(3,)`` or ``(N, 3)``, into the sonar frame."""
        return np.asarray(points, dtype=float) @ self.rotation.T + self.translation

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)


def spherical_to_cartesian(p: SphericalPoint) -> np.ndarray:
    if p.r <= 0:
        raise DegeneratePointError("range must be positive")
    cos_phi = np.cos(p.phi)
    return np.array([
        p.r * cos_phi * np.sin(p.theta),
        p.r * cos_phi * np.cos(p.theta),
        p.r * np.sin(p.phi),
    ])


def cartesian_to_spherical(p_sonar: Sequence[float]) -> SphericalPoint:
    x, y, z = (float(c) for c in p_sonar)
    r = float(np.sqrt(x * x + y * y + z * z))
    if r == 0.0:
        raise DegeneratePointError()
    return SphericalPoint(r, float(np.arctan2(x, y)), float(np.arcsin(z / r)))


def project_batch(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Project ``(N, 3)`` sonar-frame points to arrays of ranges and bearings."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(points, axis=1)
    if np.any(r == 0.0):
        raise DegeneratePointError()
    theta = np.arctan2(points[:, 0], points[:, 1])
    return r, theta


def project(p_sonar: Sequence[float]) -> Measurement:
    r, theta = project_batch(np.asarray(p_sonar, dtype=float)[None, :])
    return Measurement(float(r[0]), float(theta[0]))


def project_world(p: WorldPoint, pose: Pose) -> Measurement:
    return project(pose.apply(np.asarray(p, dtype=float)))


def in_fov_batch(points: np.ndarray, cfg: SonarConfig) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(points, axis=1)
    theta = np.arctan2(points[:, 0], points[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = np.arcsin(np.clip(points[:, 2] / r, -1.0, 1.0))
    return (
        (r >= cfg.r_min) & (r <= cfg.r_max)
        & (np.abs(theta) <= cfg.theta_max + _ANGLE_TOL)
        & (np.abs(phi) <= cfg.phi_max + _ANGLE_TOL)
    )


def in_fov(p_sonar: Sequence[float], cfg: SonarConfig) -> bool:
    return bool(in_fov_batch(np.asarray(p_sonar, dtype=float)[None, :], cfg)[0])


def add_noise_batch(
        r: np.ndarray,
        theta: np.ndarray,
        cfg: SonarConfig,
        rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Adds zero-mean Gaussian noise to ranges and bearings.

    Range draws that would make a return non-positive are redrawn.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0.0):
        raise DegeneratePointError("range must be positive")
    eta = rng.normal(0.0, cfg.sigma_r, size=r.shape)
    eps = rng.normal(0.0, cfg.sigma_theta, size=theta.shape)

    bad = r + eta <= 0.0
    while np.any(bad):
        eta[bad] = rng.normal(0.0, cfg.sigma_r, size=int(bad.sum()))
        bad = r + eta <= 0.0

    return r + eta, theta + eps


def add_noise(m: Measurement, cfg: SonarConfig, rng: np.random.Generator) -> Measurement:
    r, theta = add_noise_batch(np.array([m.r]), np.array([m.theta]), cfg, rng)
    return Measurement(float(r[0]), float(theta[0]))


def correspondences_to_arrays(corrs: Sequence[Correspondence]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack correspondences into world points ``(N, 3)``, ranges ``(N,)`` and bearings ``(N,)``."""
    if not corrs:
        return np.zeros((0, 3)), np.zeros(0), np.zeros(0)
    world = np.array([c.world for c in corrs], dtype=float)
    r = np.array([c.meas.r for c in corrs], dtype=float)
    theta = np.array([c.meas.theta for c in corrs], dtype=float)
    return world, r, theta


def arrays_to_correspondences(
        world: np.ndarray,
        r: np.ndarray,
        theta: np.ndarray,
        ids: Iterable[int] = None,
) -> List[Correspondence]:
    ids = range(len(r)) if ids is None else ids
    return [
        Correspondence(WorldPoint(*map(float, w)), Measurement(float(ri), float(ti)), int(i))
        for w, ri, ti, i in zip(world, r, theta, ids)
    ]
