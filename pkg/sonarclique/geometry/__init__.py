from .sonar import (
    Correspondence,
    Measurement,
    Pose,
    SphericalPoint,
    WorldPoint,
    add_noise,
    add_noise_batch,
    arrays_to_correspondences,
    cartesian_to_spherical,
    correspondences_to_arrays,
    in_fov,
    in_fov_batch,
    project,
    project_batch,
    project_world,
    spherical_to_cartesian,
)

__all__ = [
    "Correspondence",
    "Measurement",
    "Pose",
    "SphericalPoint",
    "WorldPoint",
    "add_noise",
    "add_noise_batch",
    "arrays_to_correspondences",
    "cartesian_to_spherical",
    "correspondences_to_arrays",
    "in_fov",
    "in_fov_batch",
    "project",
    "project_batch",
    "project_world",
    "spherical_to_cartesian",
]
