import logging
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from sonarclique.config.models import AppConfig
from sonarclique.errors import ConfigError, ResultsIOError

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"
DEFAULT_MANIFEST = "sonarclique" + MANIFEST_SUFFIX


def code_version() -> str:
    try:
        return version("sonarclique")
    except PackageNotFoundError:
        return "0+unknown"


class RunManifest(BaseModel):
    """Everything needed to reproduce a run, plus its timing summary."""
    command: str
    config: AppConfig
    seed: int
    groups: List[str] = []
    ratios: List[float] = []
    version: str = Field(default_factory=code_version)
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    timings: Dict[str, Optional[float]] = {}


def manifest_path(out: Union[str, Path, None]) -> Path:
    """``<out>.manifest.json`` next to the results, or a default file in the working directory."""
    if out is None or str(out) == "-":
        return Path(DEFAULT_MANIFEST)
    return Path(f"{out}{MANIFEST_SUFFIX}")


def write_manifest(manifest: RunManifest, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(path, e) from e
    logger.info("Wrote manifest %s", path)


def read_manifest(path: Union[str, Path]) -> RunManifest:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(path, e) from e
    try:
        return RunManifest.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"invalid manifest {path}: {e}") from e
