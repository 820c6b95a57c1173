from typing import NamedTuple, Tuple

import numpy as np


class Segment2D(NamedTuple):
    a: Tuple[float, float]
    b: Tuple[float, float]


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Distance from points ``p`` to segments ``ab``; all arrays have shape ``(..., 2)``.
    Zero-length segments degrade to point distances.
    """
    ab = b - a
    ab2 = np.einsum("...i,...i->...", ab, ab)
    ap = p - a
    safe = np.where(ab2 > 0.0, ab2, 1.0)
    t = np.where(ab2 > 0.0, np.einsum("...i,...i->...", ap, ab) / safe, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[..., None] * ab
    return np.linalg.norm(p - closest, axis=-1)


def segment_min_distance_batch(a1: np.ndarray, b1: np.ndarray, a2: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """
    Exact minimum distance between closed segments ``[a1, b1]`` and ``[a2, b2]``.

    Segments that properly cross are at distance zero; otherwise the minimum is
    attained at an endpoint of one of the two segments. Touching and collinear
    overlaps are covered by the endpoint distances.
    """
    a1, b1, a2, b2 = (np.asarray(x, dtype=float) for x in (a1, b1, a2, b2))
    o1 = _cross(b1 - a1, a2 - a1)
    o2 = _cross(b1 - a1, b2 - a1)
    o3 = _cross(b2 - a2, a1 - a2)
    o4 = _cross(b2 - a2, b1 - a2)
    crossing = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)

    d = np.minimum.reduce([
        point_segment_distance(a1, a2, b2),
        point_segment_distance(b1, a2, b2),
        point_segment_distance(a2, a1, b1),
        point_segment_distance(b2, a1, b1),
    ])
    return np.where(crossing, 0.0, d)


def segment_max_distance_batch(a1: np.ndarray, b1: np.ndarray, a2: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Maximum distance between two segments, always attained at a pair of endpoints."""
    a1, b1, a2, b2 = (np.asarray(x, dtype=float) for x in (a1, b1, a2, b2))
    return np.maximum.reduce([
        np.linalg.norm(a1 - a2, axis=-1),
        np.linalg.norm(a1 - b2, axis=-1),
        np.linalg.norm(b1 - a2, axis=-1),
        np.linalg.norm(b1 - b2, axis=-1),
    ])


def segment_min_distance(s1: Segment2D, s2: Segment2D) -> float:
    return float(segment_min_distance_batch(s1.a, s1.b, s2.a, s2.b))


def segment_max_distance(s1: Segment2D, s2: Segment2D) -> float:
    return float(segment_max_distance_batch(s1.a, s1.b, s2.a, s2.b))
