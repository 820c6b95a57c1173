"""
Plain-text correspondence files: one record per line,
``id, wx, wy, wz, r, theta`` (bearing in radians), separated by commas or
whitespace. Lines starting with ``#`` are comments.
"""
import logging
import re
from pathlib import Path
from typing import List, Sequence, Union

from sonarclique.errors import ResultsIOError
from sonarclique.geometry.sonar import Correspondence, Measurement, WorldPoint

logger = logging.getLogger(__name__)

_SEPARATOR = re.compile(r"[,\s]+")


def parse_correspondences(text: str, source: str = "<text>") -> List[Correspondence]:
    corrs: List[Correspondence] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = _SEPARATOR.split(line)
        if len(fields) != 6:
            raise ResultsIOError(source, ValueError(f"line {lineno}: expected 6 fields, got {len(fields)}"))
        try:
            cid = int(fields[0])
            wx, wy, wz, r, theta = (float(f) for f in fields[1:])
        except ValueError as e:
            raise ResultsIOError(source, ValueError(f"line {lineno}: {e}")) from e
        if r <= 0:
            raise ResultsIOError(source, ValueError(f"line {lineno}: range must be positive"))
        corrs.append(Correspondence(WorldPoint(wx, wy, wz), Measurement(r, theta), cid))
    return corrs


def read_correspondences(path: Union[str, Path]) -> List[Correspondence]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(path, e) from e
    corrs = parse_correspondences(text, str(path))
    logger.debug("Read %d correspondences from %s", len(corrs), path)
    return corrs


def format_correspondences(corrs: Sequence[Correspondence]) -> str:
    lines = ["# id, wx, wy, wz, r, theta"]
    lines += [
        f"{c.id}, {c.world.x!r}, {c.world.y!r}, {c.world.z!r}, {c.meas.r!r}, {c.meas.theta!r}"
        for c in corrs
    ]
    return "\n".join(lines) + "\n"


def write_correspondences(corrs: Sequence[Correspondence], path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(format_correspondences(corrs), encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(path, e) from e
