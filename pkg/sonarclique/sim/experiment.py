"""
Experiment grids over groups and outlier ratios.

Trial ``k`` of every cell draws from the seed stream ``(seed, k)``, so cells are
compared on the same random scenes and results do not depend on parallelism.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from sonarclique.config.models import Group, ScenarioConfig
from sonarclique.errors import ConfigError
from sonarclique.sim.trial import TrialMetrics, run_trial

logger = logging.getLogger(__name__)

AGGREGATE = "agg"


class ResultRow(BaseModel):
    case: str
    group: str
    outlier_ratio: float
    trial: Union[int, Literal["agg"]]
    tpr: float
    fpr: float
    ir: Optional[float]
    n_est_inliers: float
    time_test_ms: float
    time_clique_ms: float
    time_total_ms: float


class MetricSummary(BaseModel):
    mean: Optional[float] = None
    median: Optional[float] = None
    q25: Optional[float] = None
    q75: Optional[float] = None


class CellSummary(BaseModel):
    case: str
    group: str
    outlier_ratio: float
    trials: int
    n_empty: int
    tpr: MetricSummary
    fpr: MetricSummary
    ir: MetricSummary
    n_est_inliers: MetricSummary
    time_total_ms: MetricSummary


class ExperimentTable(BaseModel):
    rows: List[ResultRow] = []
    summaries: List[CellSummary] = []

    def trial_rows(self) -> List[ResultRow]:
        return [row for row in self.rows if row.trial != AGGREGATE]

    def aggregate_rows(self) -> List[ResultRow]:
        return [row for row in self.rows if row.trial == AGGREGATE]

    def summary(self, group: Union[Group, str], outlier_ratio: float) -> CellSummary:
        group = group.value if isinstance(group, Group) else group
        for cell in self.summaries:
            if cell.group == group and np.isclose(cell.outlier_ratio, outlier_ratio):
                return cell
        raise KeyError(f"no cell for group {group} at ratio {outlier_ratio}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def summarize(values: Sequence[Optional[float]]) -> MetricSummary:
    """Mean, median and quartiles of the values that are not missing."""
    present = np.array([v for v in values if v is not None], dtype=float)
    if present.size == 0:
        return MetricSummary()
    q25, median, q75 = np.percentile(present, [25.0, 50.0, 75.0])
    return MetricSummary(mean=float(present.mean()), median=float(median), q25=float(q25), q75=float(q75))


def _run_indexed(job: Tuple[ScenarioConfig, int, int]) -> TrialMetrics:
    cfg, trial, threads = job
    return run_trial(cfg, trial_rng(cfg.seed, trial), threads)


def _cell_config(base: ScenarioConfig, group: Union[Group, str], ratio: float) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate({**base.model_dump(), "group": group, "outlier_ratio": ratio})
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def _rows_for_cell(cfg: ScenarioConfig, metrics: List[TrialMetrics]) -> Tuple[List[ResultRow], CellSummary]:
    key = dict(case=cfg.case.value, group=cfg.group.value, outlier_ratio=cfg.outlier_ratio)
    rows = [ResultRow(**key, trial=k, **m.model_dump(exclude={"n_inliers", "n_outliers"}))
            for k, m in enumerate(metrics)]

    stats = {name: summarize([getattr(m, name) for m in metrics])
             for name in ("tpr", "fpr", "ir", "n_est_inliers", "time_test_ms", "time_clique_ms", "time_total_ms")}
    rows.append(ResultRow(**key, trial=AGGREGATE, **{name: s.mean for name, s in stats.items()}))

    summary = CellSummary(
        **key,
        trials=len(metrics),
        n_empty=sum(1 for m in metrics if m.n_est_inliers == 0),
        tpr=stats["tpr"],
        fpr=stats["fpr"],
        ir=stats["ir"],
        n_est_inliers=stats["n_est_inliers"],
        time_total_ms=stats["time_total_ms"],
    )
    return rows, summary


def run_experiment(
        base: ScenarioConfig,
        groups: Sequence[Union[Group, str]],
        ratios: Sequence[float],
        threads: int = 1,
        jobs: int = 1,
) -> ExperimentTable:
    """
    Runs ``base.trials`` trials for every (group, outlier ratio) cell.

    :param threads: Workers used inside a trial by the compatibility tests.
    :param jobs: Trials evaluated concurrently in separate processes.
    """
    if not groups or not ratios:
        raise ValueError("experiment grid must not be empty")

    table = ExperimentTable()
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for group in groups:
            for ratio in ratios:
                cfg = _cell_config(base, group, ratio)
                work = [(cfg, k, threads) for k in range(cfg.trials)]
                if executor is not None:
                    metrics = list(executor.map(_run_indexed, work))
                else:
                    metrics = [_run_indexed(job) for job in work]
                rows, summary = _rows_for_cell(cfg, metrics)
                table.rows.extend(rows)
                table.summaries.append(summary)
                logger.info("%s/%s ratio %.2f: IR mean %s over %d trials (%d empty)",
                            cfg.case.value, cfg.group.value, ratio,
                            f"{summary.ir.mean:.4f}" if summary.ir.mean is not None else "n/a",
                            summary.trials, summary.n_empty)
    finally:
        if executor is not None:
            executor.shutdown()
    return table
