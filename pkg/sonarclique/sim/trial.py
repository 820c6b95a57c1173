import logging
import time
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sonarclique.clique.factory import SolverFactory
from sonarclique.compat.coplanarity import build_hypergraph
from sonarclique.compat.in_range import build_pairwise_graph
from sonarclique.config.models import Case, ScenarioConfig
from sonarclique.sim.groups import apply_group
from sonarclique.sim.scene import generate_scene_coplanar, generate_scene_general, inject_outliers

logger = logging.getLogger(__name__)


class TrialMetrics(BaseModel):
    """Outcome of one trial; ``ir`` is ``None`` when no inlier was estimated."""
    model_config = ConfigDict(frozen=True)

    tpr: float = Field(ge=0.0, le=1.0)
    fpr: float = Field(ge=0.0, le=1.0)
    ir: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    n_est_inliers: int = Field(ge=0)
    n_inliers: int = Field(ge=0)
    n_outliers: int = Field(ge=0)
    time_test_ms: float = 0.0
    time_clique_ms: float = 0.0
    time_total_ms: float = 0.0


def compute_metrics(estimated: Sequence[int], inlier_mask: np.ndarray, **timings: float) -> TrialMetrics:
    """
    True positive ratio, false positive ratio and inlier ratio of ``estimated``
    against the ground-truth mask.
    """
    inlier_mask = np.asarray(inlier_mask, dtype=bool)
    selected = np.zeros(len(inlier_mask), dtype=bool)
    selected[list(estimated)] = True

    n_inliers = int(inlier_mask.sum())
    n_outliers = len(inlier_mask) - n_inliers
    true_pos = int((selected & inlier_mask).sum())
    false_pos = int((selected & ~inlier_mask).sum())
    n_est = true_pos + false_pos

    return TrialMetrics(
        tpr=true_pos / n_inliers if n_inliers else 0.0,
        fpr=false_pos / n_outliers if n_outliers else 0.0,
        ir=true_pos / n_est if n_est else None,
        n_est_inliers=n_est,
        n_inliers=n_inliers,
        n_outliers=n_outliers,
        **timings,
    )


def run_trial(cfg: ScenarioConfig, rng: np.random.Generator, workers: int = 1) -> TrialMetrics:
    """
    Generates a scene, injects outliers, builds the compatibility (hyper)graph, solves
    for the maximum clique and scores it against the ground truth.

    ``workers`` parallelises the compatibility tests only; results do not depend on it.
    """
    params = apply_group(cfg)
    scene_cfg = cfg.model_copy(update={"box": params.box, "sonar": params.truth_sonar})

    if cfg.case is Case.GENERAL:
        scene = generate_scene_general(scene_cfg, rng)
    else:
        scene = generate_scene_coplanar(scene_cfg, rng)
    corrs, mask = inject_outliers(
        scene.corrs, cfg.outlier_ratio, params.box, scene.gt_pose, params.truth_sonar, rng, scene.plane)

    start = time.perf_counter()
    if cfg.case is Case.GENERAL:
        graph = build_pairwise_graph(corrs, params.est_sonar, workers)
    else:
        graph = build_hypergraph(
            corrs,
            params.est_sonar,
            use_r_approx=params.use_r_approx,
            p_value=cfg.p_value,
            with_in_range_prefilter=params.with_in_range,
            workers=workers,
        )
    tested = time.perf_counter()
    result = SolverFactory.get_solver(graph).solve(graph)
    end = time.perf_counter()

    metrics = compute_metrics(
        result.vertices,
        mask,
        time_test_ms=1e3 * (tested - start),
        time_clique_ms=1e3 * (end - tested),
        time_total_ms=1e3 * (end - start),
    )
    logger.debug("Trial %s/%s ratio %.2f: |S|=%d tpr=%.3f fpr=%.3f", cfg.case.value, cfg.group.value,
                 cfg.outlier_ratio, metrics.n_est_inliers, metrics.tpr, metrics.fpr)
    return metrics
