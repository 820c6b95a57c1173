"""
Four-point coplanarity test under the orthographic approximation.

With small elevation the sonar images a plane through a 2D affine map, so the
affine map fitted on three correspondences of a correct 4-tuple predicts the
fourth measurement. The prediction residual is approximately Gaussian and is
gated with a chi-squared threshold.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import chi2

from sonarclique.compat.graphs import Hypergraph4
from sonarclique.compat.in_range import pairwise_adjacency
from sonarclique.config.models import SonarConfig
from sonarclique.errors import CollinearTripleError, DegenerateVarianceError
from sonarclique.geometry.sonar import Correspondence, Measurement, WorldPoint, correspondences_to_arrays

logger = logging.getLogger(__name__)

COLLINEAR_TOL = 1e-6
COPLANAR_TOL = 1e-6
SMALL_PHI = 1e-6
TEST_DOF = 8

_PAIRS = tuple(itertools.combinations(range(4), 2))


class RApprox(NamedTuple):
    mu_est: float
    sigma_est: float


class BaryCoeffs(NamedTuple):
    b1: float
    b2: float
    b3: float

    @property
    def b4(self) -> float:
        return -1.0

    def extended(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3, -1.0])


class PlaneChart(NamedTuple):
    """Orthonormal 2D coordinates on the plane through three world points."""
    origin: np.ndarray
    basis: np.ndarray  # (3, 2)

    def coords(self, points: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(points) - self.origin) @ self.basis


class AffineMap2D(NamedTuple):
    """2x3 affine map from homogeneous plane-chart coordinates to sonar ``[u, v]``."""
    matrix: np.ndarray
    chart: PlaneChart

    def apply(self, point: Sequence[float]) -> np.ndarray:
        q = self.chart.coords(np.asarray(point, dtype=float))[0]
        return self.matrix @ np.append(q, 1.0)


class CoplanarityVerdict(NamedTuple):
    passed: bool
    statistic: float
    threshold: float
    reason: str


def chi2_threshold(p_value: float, dof: int = TEST_DOF) -> float:
    """Upper ``1 - p_value`` quantile of the chi-squared distribution."""
    if not 0.0 < p_value < 1.0:
        raise ValueError("p_value must lie in (0, 1)")
    return float(chi2.ppf(1.0 - p_value, dof))


def _elevation_spread(phi_max: float) -> Tuple[float, float]:
    """``sin(phi)/phi`` and the variance factor of ``cos(phi)`` for ``phi ~ U(-phi_max, phi_max)``."""
    sinc = np.sin(phi_max) / phi_max
    spread = 0.5 + np.sin(2.0 * phi_max) / (4.0 * phi_max) - sinc ** 2
    return float(sinc), max(float(spread), 0.0)


def r_approx(r_star: float, cfg: SonarConfig) -> RApprox:
    """
    Gaussian moments of a range reading marginalised over the unknown elevation,
    evaluated at the observed range.
    """
    if r_star <= 0 or cfg.phi_max <= 0:
        raise ValueError("range and phi_max must be positive")
    if cfg.phi_max < SMALL_PHI:
        return RApprox(float(r_star), float(cfg.sigma_r))
    sinc, spread = _elevation_spread(cfg.phi_max)
    mu = r_star * sinc
    return RApprox(float(mu), float(np.sqrt(cfg.sigma_r ** 2 + mu ** 2 * spread)))


def effective_sigma_r(r: np.ndarray, cfg: SonarConfig, use_r_approx: bool) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if not use_r_approx or cfg.phi_max < SMALL_PHI:
        return np.full(r.shape, cfg.sigma_r)
    sinc, spread = _elevation_spread(cfg.phi_max)
    return np.sqrt(cfg.sigma_r ** 2 + (r * sinc) ** 2 * spread)


def plane_chart(p1: Sequence[float], p2: Sequence[float], p3: Sequence[float]) -> PlaneChart:
    p1, p2, p3 = (np.asarray(p, dtype=float) for p in (p1, p2, p3))
    if _is_collinear(p1[None], p2[None], p3[None])[0]:
        raise CollinearTripleError()
    e1 = (p2 - p1) / np.linalg.norm(p2 - p1)
    normal = np.cross(p2 - p1, p3 - p1)
    normal /= np.linalg.norm(normal)
    e2 = np.cross(normal, e1)
    return PlaneChart(p1, np.stack([e1, e2], axis=1))


def _chart_system(chart: PlaneChart, p1, p2, p3) -> np.ndarray:
    q = chart.coords(np.array([p1, p2, p3], dtype=float))
    return np.vstack([q.T, np.ones(3)])


def fit_affine(
        p1: WorldPoint,
        p2: WorldPoint,
        p3: WorldPoint,
        m1: Sequence[float],
        m2: Sequence[float],
        m3: Sequence[float],
) -> AffineMap2D:
    """
    Affine map ``A`` with ``A [q_i; 1] = m_i`` where ``q_i`` are plane-chart coordinates
    of the world points and ``m_i`` are measurements as ``[u, v]``.
    """
    chart = plane_chart(p1, p2, p3)
    system = _chart_system(chart, p1, p2, p3)
    targets = np.array([m1, m2, m3], dtype=float).T
    return AffineMap2D(np.linalg.solve(system.T, targets.T).T, chart)


def bary_coeffs(p1: WorldPoint, p2: WorldPoint, p3: WorldPoint, p4: WorldPoint) -> BaryCoeffs:
    """Affine coordinates of the in-plane projection of ``p4`` with respect to ``p1..p3``."""
    chart = plane_chart(p1, p2, p3)
    system = _chart_system(chart, p1, p2, p3)
    q4 = chart.coords(np.asarray(p4, dtype=float))[0]
    b = np.linalg.solve(system, np.append(q4, 1.0))
    return BaryCoeffs(*(float(x) for x in b))


def measurement_terms(
        r: np.ndarray,
        theta: np.ndarray,
        cfg: SonarConfig,
        use_r_approx: bool,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-measurement ``u``, ``v`` and their first-order variance contributions.

    Range noise projects with ``sin``/``cos`` of the bearing, bearing noise with the
    range times the complementary function.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    sigma_r = effective_sigma_r(r, cfg, use_r_approx)
    bearing = (r * cfg.sigma_theta) ** 2
    var_u = bearing * cos_t ** 2 + sin_t ** 2 * sigma_r ** 2
    var_v = bearing * sin_t ** 2 + cos_t ** 2 * sigma_r ** 2
    return r * sin_t, r * cos_t, var_u, var_v


def residual_and_variance(
        b: BaryCoeffs,
        meas: Sequence[Measurement],
        cfg: SonarConfig,
        use_r_approx: bool,
) -> Tuple[np.ndarray, np.ndarray]:
    if len(meas) != 4:
        raise ValueError("exactly four measurements are required")
    r = np.array([m.r for m in meas])
    theta = np.array([m.theta for m in meas])
    u, v, a_u, a_v = measurement_terms(r, theta, cfg, use_r_approx)
    c = b.extended()
    residual = np.array([c @ u, c @ v])
    variance = np.array([c ** 2 @ a_u, c ** 2 @ a_v])
    if np.any((variance == 0.0) & (residual != 0.0)):
        raise DegenerateVarianceError()
    return residual, variance


def _is_collinear(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray) -> np.ndarray:
    """True where the triangle's smallest height is below ``COLLINEAR_TOL`` times its longest side."""
    area2 = np.linalg.norm(np.cross(p2 - p1, p3 - p1), axis=-1)
    longest = np.maximum.reduce([
        np.linalg.norm(p2 - p1, axis=-1),
        np.linalg.norm(p3 - p1, axis=-1),
        np.linalg.norm(p3 - p2, axis=-1),
    ])
    # smallest height = area2 / longest
    return area2 < COLLINEAR_TOL * longest ** 2


def _barycentric(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray, p4: np.ndarray) -> np.ndarray:
    """Batched affine coordinates of the projection of ``p4`` on the plane ``p1 p2 p3``; shape ``(K, 3)``."""
    v0, v1, v2 = p2 - p1, p3 - p1, p4 - p1
    d00 = np.einsum("ki,ki->k", v0, v0)
    d01 = np.einsum("ki,ki->k", v0, v1)
    d11 = np.einsum("ki,ki->k", v1, v1)
    d20 = np.einsum("ki,ki->k", v2, v0)
    d21 = np.einsum("ki,ki->k", v2, v1)
    denom = d00 * d11 - d01 ** 2
    denom = np.where(denom > 0.0, denom, 1.0)
    b2 = (d11 * d20 - d01 * d21) / denom
    b3 = (d00 * d21 - d01 * d20) / denom
    return np.stack([1.0 - b2 - b3, b2, b3], axis=1)


def tuple_statistics(
        world: np.ndarray,
        u: np.ndarray,
        v: np.ndarray,
        var_u: np.ndarray,
        var_v: np.ndarray,
        tuples: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Summed leave-one-out statistic for every row of ``tuples`` (``(K, 4)`` indices).

    Returns ``(statistic, degenerate, non_coplanar)``; the statistic is meaningless
    where either flag is set.
    """
    W, U, V, AU, AV = world[tuples], u[tuples], v[tuples], var_u[tuples], var_v[tuples]
    k_rows = len(tuples)
    statistic = np.zeros(k_rows)
    degenerate = np.zeros(k_rows, dtype=bool)
    non_coplanar = np.zeros(k_rows, dtype=bool)

    for k in range(4):
        others = [j for j in range(4) if j != k]
        p1, p2, p3, p4 = W[:, others[0]], W[:, others[1]], W[:, others[2]], W[:, k]

        degenerate |= _is_collinear(p1, p2, p3)
        normal = np.cross(p2 - p1, p3 - p1)
        norm = np.linalg.norm(normal, axis=1)
        offset = np.abs(np.einsum("ki,ki->k", normal, p4 - p1)) / np.where(norm > 0.0, norm, 1.0)
        non_coplanar |= offset > COPLANAR_TOL

        c = np.empty((k_rows, 4))
        c[:, others] = _barycentric(p1, p2, p3, p4)
        c[:, k] = -1.0
        c2 = c ** 2

        for comp, var in ((U, AU), (V, AV)):
            res = np.einsum("kj,kj->k", c, comp)
            s2 = np.einsum("kj,kj->k", c2, var)
            with np.errstate(divide="ignore", invalid="ignore"):
                term = np.where(s2 > 0.0, res ** 2 / np.where(s2 > 0.0, s2, 1.0),
                                np.where(res == 0.0, 0.0, np.inf))
            statistic += term

    return statistic, degenerate, non_coplanar


def coplanarity_statistic(
        tuple4: Sequence[Correspondence],
        cfg: SonarConfig,
        use_r_approx: bool = True,
        p_value: float = 0.01,
) -> CoplanarityVerdict:
    if len(tuple4) != 4:
        raise ValueError("exactly four correspondences are required")
    world, r, theta = correspondences_to_arrays(tuple4)
    u, v, var_u, var_v = measurement_terms(r, theta, cfg, use_r_approx)
    statistic, degenerate, non_coplanar = tuple_statistics(world, u, v, var_u, var_v, np.arange(4)[None, :])
    threshold = chi2_threshold(p_value)

    if degenerate[0]:
        return CoplanarityVerdict(False, float("nan"), threshold, "degenerate")
    if non_coplanar[0]:
        return CoplanarityVerdict(False, float("nan"), threshold, "non-coplanar")
    passed = bool(statistic[0] <= threshold)
    return CoplanarityVerdict(passed, float(statistic[0]), threshold, "ok" if passed else "rejected")


def coplanarity_test(
        tuple4: Sequence[Correspondence],
        cfg: SonarConfig,
        use_r_approx: bool = True,
        p_value: float = 0.01,
) -> bool:
    return coplanarity_statistic(tuple4, cfg, use_r_approx, p_value).passed


def _tuples_with_first(first: int, n: int) -> np.ndarray:
    rest = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(first + 1, n), 3)),
        dtype=np.intp,
    ).reshape(-1, 3)
    return np.column_stack([np.full(len(rest), first, dtype=np.intp), rest])


def build_hypergraph(
        corrs: Sequence[Correspondence],
        cfg: SonarConfig,
        use_r_approx: bool = True,
        p_value: float = 0.01,
        with_in_range_prefilter: bool = False,
        workers: int = 1,
) -> Hypergraph4:
    """
    4-uniform compatibility hypergraph over all 4-tuples of ``corrs``.

    Tuples are partitioned by their smallest index; partitions are evaluated
    independently and concatenated in index order.
    """
    world, r, theta = correspondences_to_arrays(corrs)
    n = len(r)
    if n < 4:
        return Hypergraph4(n)

    u, v, var_u, var_v = measurement_terms(r, theta, cfg, use_r_approx)
    threshold = chi2_threshold(p_value)
    adjacency: Optional[np.ndarray] = None
    if with_in_range_prefilter:
        adjacency = pairwise_adjacency(world, r, theta, cfg, workers)

    def evaluate(first: int) -> np.ndarray:
        tuples = _tuples_with_first(first, n)
        if adjacency is not None:
            keep = np.ones(len(tuples), dtype=bool)
            for a, b in _PAIRS:
                keep &= adjacency[tuples[:, a], tuples[:, b]]
            tuples = tuples[keep]
        if len(tuples) == 0:
            return tuples
        statistic, degenerate, non_coplanar = tuple_statistics(world, u, v, var_u, var_v, tuples)
        return tuples[~degenerate & ~non_coplanar & (statistic <= threshold)]

    firsts = range(n - 3)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(evaluate, firsts))
    else:
        parts = [evaluate(first) for first in firsts]

    accepted = np.concatenate(parts) if parts else np.zeros((0, 4), dtype=np.intp)
    logger.debug("Coplanarity test kept %d hyperedges over %d vertices", len(accepted), n)
    return Hypergraph4.from_array(n, accepted)
