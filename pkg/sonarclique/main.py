import argparse
import logging
import sys
import time
from typing import Dict, List, Optional, Sequence

import numpy as np

from sonarclique.clique.factory import SolverFactory
from sonarclique.compat.coplanarity import build_hypergraph
from sonarclique.compat.in_range import build_pairwise_graph
from sonarclique.config import AppConfig, ConfigLoader
from sonarclique.config.models import COPLANAR_GROUPS, GENERAL_GROUPS, Case
from sonarclique.errors import ConfigError, SonarCliqueError
from sonarclique.io.correspondences import read_correspondences
from sonarclique.io.manifest import RunManifest, manifest_path, read_manifest, write_manifest
from sonarclique.io.results import emit_bench, emit_rdist, emit_results, write_text
from sonarclique.sim.bench import timing_benchmark
from sonarclique.sim.experiment import run_experiment
from sonarclique.sim.rdist import r_distribution_study

logger = logging.getLogger("sonarclique")

GROUP_ORDER = (
    "standard", "reduced_bound", "expanded_bound", "half_scale", "quarter_scale",
    "underestimated", "overestimated", "no_approx", "with_in_range",
)


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def _name_list(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Path to config file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")
    common.add_argument("--threads", type=int, default=None, help="Worker threads for the compatibility tests")
    common.add_argument("--out", type=str, default=None, help="Output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "md"), default=None, help="Output format")

    sonar = argparse.ArgumentParser(add_help=False)
    sonar.add_argument("--phi-max-deg", type=float, default=None, help="Elevation half-aperture in degrees")
    sonar.add_argument("--theta-max-deg", type=float, default=None, help="Bearing half-aperture in degrees")
    sonar.add_argument("--sigma-r", type=float, default=None, help="Range noise standard deviation in meters")
    sonar.add_argument("--sigma-theta-deg", type=float, default=None, help="Bearing noise standard deviation in degrees")

    experiment = argparse.ArgumentParser(add_help=False, parents=[common, sonar])
    experiment.add_argument("--ratios", type=_float_list, default=None, help="Comma-separated outlier ratios")
    experiment.add_argument("--trials", type=int, default=None, help="Trials per cell")
    experiment.add_argument("--group", type=_name_list, default=None, help="Comma-separated groups, or 'all'")
    experiment.add_argument("--seed", type=int, default=None, help="Master seed")
    experiment.add_argument("--n-points", type=int, default=None, help="Correspondences per trial")
    experiment.add_argument("--jobs", type=int, default=1, help="Trials run concurrently in separate processes")
    experiment.add_argument("--manifest", type=str, default=None, help="Replay the run recorded in a manifest")

    parser = argparse.ArgumentParser(prog="sonarclique", description="Outlier rejection for 2D forward-looking sonar")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("general", parents=[experiment], help="General-case experiment grid")

    coplanar = sub.add_parser("coplanar", parents=[experiment], help="Coplanar-case experiment grid")
    coplanar.add_argument("--p-value", type=float, default=None, help="Significance level of the coplanarity test")
    coplanar.add_argument("--no-r-approx", action="store_true", help="Add the group without the range approximation")
    coplanar.add_argument("--with-in-range", action="store_true", help="Add the group with the in-range prefilter")

    rdist = sub.add_parser("rdist", parents=[common], help="Range approximation study")
    rdist.add_argument("--r", type=float, default=2.2, help="True range in meters")
    rdist.add_argument("--sigma-r", type=float, default=0.005, help="Range noise standard deviation in meters")
    rdist.add_argument("--phi-max-deg", type=float, default=7.0, help="Elevation half-aperture in degrees")
    rdist.add_argument("--samples", type=int, default=200_000, help="Monte-Carlo samples")
    rdist.add_argument("--bins", type=int, default=60, help="Histogram bins")
    rdist.add_argument("--seed", type=int, default=0, help="Seed")

    bench = sub.add_parser("bench", parents=[common], help="Timing benchmark")
    bench.add_argument("--case", choices=("general", "coplanar"), default="general")
    bench.add_argument("--sizes", type=_int_list, default=[100, 200, 400], help="Comma-separated correspondence counts")
    bench.add_argument("--trials", type=int, default=5, help="Trials per size")
    bench.add_argument("--ratio", type=float, default=0.8, help="Outlier ratio")
    bench.add_argument("--seed", type=int, default=0, help="Seed")

    reject = sub.add_parser("reject", parents=[common, sonar], help="Estimate inliers of a correspondence file")
    reject.add_argument("file", type=str, help="Correspondence file: id, wx, wy, wz, r, theta per line")
    reject.add_argument("--case", choices=("general", "coplanar"), default="general")
    reject.add_argument("--p-value", type=float, default=None, help="Significance level of the coplanarity test")
    reject.add_argument("--exact", action="store_true", help="Exact hyperclique search for small coplanar inputs")
    return parser


def _overrides(args: argparse.Namespace, case: Optional[str] = None) -> Dict[str, Dict[str, str]]:
    """Maps command-line flags onto the INI sections they override."""
    sonar: Dict[str, str] = {}
    for flag, key in (("phi_max_deg", "phi_max_deg"), ("theta_max_deg", "theta_max_deg"),
                      ("sigma_r", "sigma_r"), ("sigma_theta_deg", "sigma_theta_deg")):
        value = getattr(args, flag, None)
        if value is not None:
            sonar[key] = str(value)

    scenario: Dict[str, str] = {}
    if case is not None:
        scenario["case"] = case
    for flag in ("trials", "seed", "n_points", "p_value"):
        value = getattr(args, flag, None)
        if value is not None:
            scenario[flag] = str(value)

    run: Dict[str, str] = {}
    for flag in ("threads", "out", "format"):
        value = getattr(args, flag, None)
        if value is not None:
            run[flag] = str(value)
    return {"SONAR": sonar, "SCENARIO": scenario, "RUN": run}


def _resolve_groups(args: argparse.Namespace, case: Case, default: str) -> List[str]:
    allowed = GENERAL_GROUPS if case is Case.GENERAL else COPLANAR_GROUPS
    extra = []
    if getattr(args, "no_r_approx", False):
        extra.append("no_approx")
    if getattr(args, "with_in_range", False):
        extra.append("with_in_range")

    if args.group is None:
        return extra or [default]
    if args.group == ["all"]:
        return [g for g in GROUP_ORDER if g in {a.value for a in allowed}]
    return args.group + [g for g in extra if g not in args.group]


def _apply_run_flags(config: AppConfig, args: argparse.Namespace) -> AppConfig:
    run = config.run.model_copy(update={
        k: getattr(args, k) for k in ("threads", "out", "format") if getattr(args, k, None) is not None
    })
    return config.model_copy(update={"run": run})


def run_experiment_command(args: argparse.Namespace, case: Case) -> None:
    if args.manifest:
        manifest = read_manifest(args.manifest)
        if manifest.command != case.value:
            raise ConfigError(f"manifest {args.manifest} records a '{manifest.command}' run")
        config = _apply_run_flags(manifest.config, args)
        groups, ratios = manifest.groups, manifest.ratios
        logger.info("Replaying %s with seed %d", args.manifest, manifest.seed)
    else:
        config = ConfigLoader(args).load_config(_overrides(args, case.value))
        groups = _resolve_groups(args, case, config.scenario.group.value)
        ratios = args.ratios if args.ratios else [config.scenario.outlier_ratio]

    scenario = config.scenario
    start = time.perf_counter()
    table = run_experiment(scenario, groups, ratios, threads=config.run.threads, jobs=args.jobs)
    elapsed = time.perf_counter() - start

    emit_results(table, config.run.format, config.run.out, seed=scenario.seed)
    trial_totals = [row.time_total_ms for row in table.trial_rows()]
    write_manifest(RunManifest(
        command=case.value,
        config=config,
        seed=scenario.seed,
        groups=list(dict.fromkeys(cell.group for cell in table.summaries)),
        ratios=list(ratios),
        timings={
            "wall_clock_s": elapsed,
            "time_total_ms_mean": float(np.mean(trial_totals)) if trial_totals else None,
        },
    ), manifest_path(config.run.out))


def run_rdist_command(args: argparse.Namespace) -> None:
    try:
        result = r_distribution_study(
            args.r, args.sigma_r, np.radians(args.phi_max_deg), args.samples,
            rng=np.random.default_rng(args.seed), bins=args.bins,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    logger.info("mu_est=%.6f sigma_est=%.6f tv=%.4f",
                result.gaussian_fit.mu_est, result.gaussian_fit.sigma_est, result.tv_distance)
    emit_rdist(result, args.format or "csv", args.out)


def run_bench_command(args: argparse.Namespace) -> None:
    config = ConfigLoader(args).load_config(_overrides(args, args.case))
    table = timing_benchmark(
        args.case, args.sizes, outlier_ratio=args.ratio, trials=args.trials,
        threads=config.run.threads, seed=args.seed, base=config.scenario,
    )
    emit_bench(table, args.format or "csv", args.out)


def run_reject_command(args: argparse.Namespace) -> None:
    config = ConfigLoader(args).load_config(_overrides(args, args.case))
    corrs = read_correspondences(args.file)
    sonar = config.scenario.sonar

    if args.case == Case.GENERAL.value:
        graph = build_pairwise_graph(corrs, sonar, config.run.threads)
    else:
        graph = build_hypergraph(corrs, sonar, p_value=config.scenario.p_value, workers=config.run.threads)
    result = SolverFactory.get_solver(graph, exact=args.exact).solve(graph)

    ids = [corrs[v].id for v in result.vertices]
    logger.info("Kept %d of %d correspondences", len(ids), len(corrs))
    write_text("".join(f"{i}\n" for i in ids), args.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "general":
            run_experiment_command(args, Case.GENERAL)
        elif args.command == "coplanar":
            run_experiment_command(args, Case.COPLANAR)
        elif args.command == "rdist":
            run_rdist_command(args)
        elif args.command == "bench":
            run_bench_command(args)
        elif args.command == "reject":
            run_reject_command(args)
    except SonarCliqueError as e:
        logger.error("%s", e)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
