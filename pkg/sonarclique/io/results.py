"""
Serialization of experiment, benchmark and r-distribution results.

``path`` of ``None`` or ``"-"`` writes to standard output.
"""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from jinja2 import Environment, PackageLoader, select_autoescape

from sonarclique.errors import ResultsIOError
from sonarclique.sim.bench import BenchTable
from sonarclique.sim.experiment import ExperimentTable
from sonarclique.sim.rdist import RDistribution

logger = logging.getLogger(__name__)

PathLike = Union[str, Path, None]

CSV_COLUMNS = [
    "case", "group", "outlier_ratio", "trial", "tpr", "fpr", "ir",
    "n_est_inliers", "time_test_ms", "time_clique_ms", "time_total_ms",
]
BENCH_COLUMNS = ["case", "n", "trials", "time_test_ms", "time_clique_ms", "time_total_ms"]
FORMATS = ("csv", "json", "md")


def _pct(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100.0 * value:.2f}%"


def _ms(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _jinja_env() -> Environment:
    env = Environment(
        loader=PackageLoader("sonarclique", "templates"),
        autoescape=select_autoescape(["html", "xml"]),
    )
    env.filters["pct"] = _pct
    env.filters["ms"] = _ms
    return env


def write_text(text: str, path: PathLike) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(path, e) from e
    logger.info("Wrote %s", path)


def _csv_text(columns: Sequence[str], records: Iterable[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow({k: ("" if v is None else v) for k, v in record.items()})
    return buffer.getvalue()


def render_csv(table: ExperimentTable) -> str:
    return _csv_text(CSV_COLUMNS, (row.model_dump() for row in table.rows))


def render_json(table: ExperimentTable) -> str:
    payload = {
        "rows": [row.model_dump() for row in table.rows],
        "summaries": [cell.model_dump() for cell in table.summaries],
    }
    return json.dumps(payload, indent=2) + "\n"


def render_markdown(table: ExperimentTable, seed: Optional[int] = None) -> str:
    case = table.summaries[0].case if table.summaries else ""
    template = _jinja_env().get_template("summary.md.j2")
    return template.render(case=case, seed=seed, summaries=table.summaries)


def emit_results(table: ExperimentTable, fmt: str = "csv", path: PathLike = None, seed: Optional[int] = None) -> None:
    """
    Writes ``table`` as CSV (one row per trial plus an ``agg`` row per cell), JSON
    (the same rows plus per-cell summaries) or a Markdown summary of the cells.
    """
    if fmt == "csv":
        text = render_csv(table)
    elif fmt == "json":
        text = render_json(table)
    elif fmt == "md":
        text = render_markdown(table, seed)
    else:
        raise ValueError(f"unsupported format '{fmt}', expected one of {', '.join(FORMATS)}")
    write_text(text, path)


def emit_bench(table: BenchTable, fmt: str = "csv", path: PathLike = None) -> None:
    if fmt == "json":
        text = table.model_dump_json(indent=2) + "\n"
    else:
        text = _csv_text(BENCH_COLUMNS, (row.model_dump() for row in table.rows))
        slopes = ", ".join(f"{phase}={slope:.3f}" for phase, slope in table.slopes.items() if slope is not None)
        if slopes:
            logger.info("log-log slopes: %s", slopes)
    write_text(text, path)


def emit_rdist(result: RDistribution, fmt: str = "csv", path: PathLike = None) -> None:
    """Histogram bins with the empirical density; fit and distance go to the JSON form."""
    edges, density = result.histogram
    records: List[Dict[str, Any]] = [
        {"bin_lo": float(lo), "bin_hi": float(hi), "density": float(d)}
        for lo, hi, d in zip(edges[:-1], edges[1:], density)
    ]
    if fmt == "json":
        payload = {
            "mu_est": result.gaussian_fit.mu_est,
            "sigma_est": result.gaussian_fit.sigma_est,
            "tv_distance": result.tv_distance,
            "histogram": records,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = _csv_text(["bin_lo", "bin_hi", "density"], records)
    write_text(text, path)
