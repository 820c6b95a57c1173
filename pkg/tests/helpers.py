import math

import numpy as np

from sonarclique.geometry.sonar import Pose, arrays_to_correspondences, project_batch


def zero_elevation_correspondences(n: int, rng: np.random.Generator, pose: Pose = None):
    """
    Noiseless correspondences of points in the sonar's zero-elevation plane; the
    sonar then observes their coordinates exactly.
    """
    x = rng.uniform(-0.5, 0.5, size=n)
    y = rng.uniform(1.6, 2.8, size=n)
    sonar_points = np.column_stack([x, y, np.zeros(n)])
    pose = pose if pose is not None else Pose.random(rng)
    r, theta = project_batch(sonar_points)
    world = pose.inverse().apply(sonar_points)
    return arrays_to_correspondences(world, r, theta)


def deg(value: float) -> float:
    return math.radians(value)


def hypercliques_by_level(h):
    """
    All hypercliques of ``h`` grouped by size, grown level by level from the
    hyperedges; sorted prefixes of a hyperclique are hypercliques themselves.
    """
    levels = [sorted(h.hyperedges)]
    while levels[-1]:
        grown = []
        for clique in levels[-1]:
            for v in range(clique[-1] + 1, h.n):
                candidate = clique + (v,)
                if h.is_hyperclique(candidate):
                    grown.append(candidate)
        levels.append(grown)
    return [level for level in levels if level]


def brute_force_max_hyperclique(h):
    levels = hypercliques_by_level(h)
    return min(levels[-1]) if levels else ()


def random_4_subsets(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return np.sort(rng.random((m, n)).argsort(axis=1)[:, :4], axis=1)
