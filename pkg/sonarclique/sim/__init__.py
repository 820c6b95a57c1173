from .bench import BenchRow, BenchTable, timing_benchmark
from .experiment import CellSummary, ExperimentTable, MetricSummary, ResultRow, run_experiment, trial_rng
from .groups import EffectiveParams, apply_group
from .rdist import RDistribution, r_distribution_study
from .scene import Plane, Scene, generate_scene_coplanar, generate_scene_general, inject_outliers
from .trial import TrialMetrics, compute_metrics, run_trial

__all__ = [
    "BenchRow",
    "BenchTable",
    "CellSummary",
    "EffectiveParams",
    "ExperimentTable",
    "MetricSummary",
    "Plane",
    "RDistribution",
    "ResultRow",
    "Scene",
    "TrialMetrics",
    "apply_group",
    "compute_metrics",
    "generate_scene_coplanar",
    "generate_scene_general",
    "inject_outliers",
    "r_distribution_study",
    "run_experiment",
    "run_trial",
    "timing_benchmark",
]
