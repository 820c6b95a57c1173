import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from sonarclique.config.models import Case, ScenarioConfig
from sonarclique.sim.experiment import trial_rng
from sonarclique.sim.trial import run_trial

logger = logging.getLogger(__name__)

PHASES = ("time_test_ms", "time_clique_ms", "time_total_ms")


class BenchRow(BaseModel):
    case: str
    n: int
    trials: int
    time_test_ms: float
    time_clique_ms: float
    time_total_ms: float


class BenchTable(BaseModel):
    rows: List[BenchRow] = []
    slopes: Dict[str, Optional[float]] = {}


def loglog_slope(sizes: Sequence[int], times: Sequence[float]) -> Optional[float]:
    """Least-squares slope of ``log(time)`` against ``log(n)``; ``None`` below two usable points."""
    sizes = np.asarray(sizes, dtype=float)
    times = np.asarray(times, dtype=float)
    usable = (sizes > 0) & (times > 0)
    if np.unique(sizes[usable]).size < 2:
        return None
    slope, _ = np.polyfit(np.log(sizes[usable]), np.log(times[usable]), 1)
    return float(slope)


def timing_benchmark(
        case: Union[Case, str],
        sizes: Sequence[int],
        outlier_ratio: float = 0.8,
        trials: int = 5,
        threads: int = 8,
        seed: int = 0,
        base: Optional[ScenarioConfig] = None,
) -> BenchTable:
    """
    Mean wall-clock time of the compatibility tests, the clique search and their
    sum for each number of correspondences in ``sizes``.

    Trials run one after another so that phase timings are attributable; the
    tests inside a trial use ``threads`` workers.
    """
    base = base if base is not None else ScenarioConfig()
    table = BenchTable()
    for n in sizes:
        cfg = ScenarioConfig.model_validate({
            **base.model_dump(), "case": case, "n_points": n, "outlier_ratio": outlier_ratio,
            "trials": trials, "seed": seed,
        })
        metrics = [run_trial(cfg, trial_rng(seed, k), threads) for k in range(trials)]
        row = BenchRow(
            case=cfg.case.value,
            n=n,
            trials=trials,
            **{phase: float(np.mean([getattr(m, phase) for m in metrics])) for phase in PHASES},
        )
        table.rows.append(row)
        logger.info("%s n=%d: test %.2f ms, clique %.2f ms, total %.2f ms",
                    row.case, n, row.time_test_ms, row.time_clique_ms, row.time_total_ms)

    table.slopes = {
        phase: loglog_slope([row.n for row in table.rows], [getattr(row, phase) for row in table.rows])
        for phase in PHASES
    }
    return table
