from .correspondences import format_correspondences, parse_correspondences, read_correspondences, write_correspondences
from .manifest import RunManifest, manifest_path, read_manifest, write_manifest
from .results import CSV_COLUMNS, emit_bench, emit_rdist, emit_results, render_csv, render_json, render_markdown

__all__ = [
    "CSV_COLUMNS",
    "RunManifest",
    "emit_bench",
    "emit_rdist",
    "emit_results",
    "format_correspondences",
    "manifest_path",
    "parse_correspondences",
    "read_correspondences",
    "read_manifest",
    "render_csv",
    "render_json",
    "render_markdown",
    "write_correspondences",
    "write_manifest",
]
