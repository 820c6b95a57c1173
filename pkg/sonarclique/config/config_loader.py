import argparse
import configparser
import io
import logging
import math
import os
from pathlib import Path
from typing import Dict, Mapping, Optional

from platformdirs import user_config_dir
from pydantic import ValidationError

from sonarclique.config.models import AppConfig, Box, RunConfig, ScenarioConfig, SonarConfig
from sonarclique.errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "SONARCLIQUE_THREADS"

# Keys stored in radians internally; the INI file may give either "<key>" (radians)
# or "<key>_deg" (degrees).
SONAR_ANGLE_KEYS = ("theta_max", "phi_max", "sigma_theta", "beta_theta")
SONAR_FLOAT_KEYS = ("r_min", "r_max", "sigma_r", "beta_r")

Overrides = Mapping[str, Mapping[str, str]]


class ConfigLoader:
    """
    Loads the run configuration from an INI file and command-line overrides.
    """

    def __init__(self, args: Optional[argparse.Namespace] = None):
        self.user_config_dir = Path(user_config_dir("sonarclique"))

        custom_path = getattr(args, "config", None) if args else None
        self.config_path = self._resolve_config_path(custom_path)

        self.parser = configparser.ConfigParser()

    def load_config(self, overrides: Optional[Overrides] = None) -> AppConfig:
        """
        Reads the INI file, applies overrides and validates the result via Pydantic.
        """
        if self.config_path is not None:
            if not self.config_path.is_file():
                raise ConfigError(f"config file not found: {self.config_path}")
            self.parser.read(self.config_path, encoding="utf-8")
            logger.debug("Read configuration from %s", self.config_path)

        for section, values in (overrides or {}).items():
            if not self.parser.has_section(section):
                self.parser.add_section(section)
            for key, value in values.items():
                self.parser.set(section, key, str(value))

        return config_from_parser(self.parser)

    def dump(self, config: AppConfig, path: Optional[Path] = None) -> Path:
        """Writes ``config`` as INI to ``path`` (default: the resolved config path)."""
        path = Path(path) if path else self.config_path or self.user_config_dir / "config.ini"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(dump_config(config), encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"could not write config to {path}: {e}") from e
        return path

    def _resolve_config_path(self, custom_path: Optional[str]) -> Optional[Path]:
        """
        Resolves the config file path with priority:
        1. Explicit path passed to the program via the --config parameter.
        2. 'sonarclique.ini' in the current working directory.
        3. 'config.ini' in the users config directory.

        If none exists, creates the default config in the users config directory.
        """
        if custom_path:
            return Path(custom_path)

        cwd_config = Path.cwd() / "sonarclique.ini"
        if cwd_config.is_file():
            return cwd_config

        user_config = self.user_config_dir / "config.ini"
        if user_config.is_file():
            return user_config

        if self._create_default_config(user_config):
            return user_config
        return None

    def _create_default_config(self, path: Optional[Path] = None) -> bool:
        """Writes the default configuration values to the specified path."""
        if not path:
            path = self.user_config_dir / "config.ini"

        default_content = (
            "[SONAR]\n"
            "theta_max_deg = 65\n"
            "phi_max_deg = 7\n"
            "r_min = 0.5\n"
            "r_max = 10.0\n"
            "sigma_r = 0.005\n"
            "sigma_theta_deg = 0.5\n"
            "beta_r = 0.015\n"
            "beta_theta_deg = 1.5\n\n"
            "[SCENARIO]\n"
            "case = general\n"
            "group = standard\n"
            "n_points = 100\n"
            "outlier_ratio = 0.8\n"
            "trials = 500\n"
            "seed = 0\n"
            "box_lo = -0.6, 1.6, -0.3\n"
            "box_hi = 0.6, 2.8, 0.3\n"
            "plane_anchor_x = -0.15, 0.15\n"
            "plane_anchor_y = 2.05, 2.35\n"
            "plane_tilt_min_deg = 5\n"
            "plane_tilt_max_deg = 70\n"
            "translation_range = 5.0\n"
            "p_value = 0.01\n\n"
            "[RUN]\n"
            "; threads defaults to $SONARCLIQUE_THREADS, else 8\n"
            "format = csv\n"
        )

        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(default_content, encoding="utf-8")
        except OSError as e:
            logger.warning("Could not create default config at %s: %s", path, e)
            return False
        return True


def parse_config(path: Optional[str] = None, overrides: Optional[Overrides] = None) -> AppConfig:
    """
    Builds a validated configuration from an optional INI file plus overrides.

    Without a path only the overrides and the built-in defaults are used; the
    user config directory is not consulted.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        if not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        parser.read(path, encoding="utf-8")
    for section, values in (overrides or {}).items():
        if not parser.has_section(section):
            parser.add_section(section)
        for key, value in values.items():
            parser.set(section, key, str(value))
    return config_from_parser(parser)


def parse_config_text(text: str) -> AppConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    return config_from_parser(parser)


def config_from_parser(parser: configparser.ConfigParser) -> AppConfig:
    def get_section(name: str) -> Dict[str, str]:
        """Helper to safely extract a section as a dict"""
        return dict(parser[name]) if name in parser else {}

    sonar_raw = get_section("SONAR")
    scenario_raw = get_section("SCENARIO")
    run_raw = get_section("RUN")

    try:
        sonar = SonarConfig(**_sonar_kwargs(sonar_raw))
        scenario = ScenarioConfig(sonar=sonar, **_scenario_kwargs(scenario_raw))
        run_kwargs = dict(run_raw)
        if "threads" not in run_kwargs and os.environ.get(THREADS_ENV):
            run_kwargs["threads"] = os.environ[THREADS_ENV]
        run = RunConfig(**run_kwargs)
    except ValidationError as e:
        raise ConfigError(_describe_validation_error(e)) from e
    except ValueError as e:
        raise ConfigError(str(e)) from e

    return AppConfig(scenario=scenario, run=run)


def dump_config(config: AppConfig) -> str:
    """
    Serializes a configuration to INI text. Angles are written in radians so that
    parsing the output reproduces the configuration exactly.
    """
    parser = configparser.ConfigParser()
    sonar = config.scenario.sonar
    parser["SONAR"] = {key: repr(getattr(sonar, key)) for key in SONAR_ANGLE_KEYS + SONAR_FLOAT_KEYS}

    s = config.scenario
    parser["SCENARIO"] = {
        "case": s.case.value,
        "group": s.group.value,
        "n_points": str(s.n_points),
        "outlier_ratio": repr(s.outlier_ratio),
        "trials": str(s.trials),
        "seed": str(s.seed),
        "box_lo": _join(s.box.lo),
        "box_hi": _join(s.box.hi),
        "plane_anchor_x": _join(s.plane_anchor_box[0]),
        "plane_anchor_y": _join(s.plane_anchor_box[1]),
        "plane_tilt_min": repr(s.plane_tilt_range[0]),
        "plane_tilt_max": repr(s.plane_tilt_range[1]),
        "translation_range": repr(s.translation_range),
        "p_value": repr(s.p_value),
    }

    run = config.run
    parser["RUN"] = {"threads": str(run.threads), "format": run.format}
    if run.out:
        parser["RUN"]["out"] = run.out

    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()


def _sonar_kwargs(raw: Dict[str, str]) -> Dict[str, float]:
    kwargs: Dict[str, float] = {}
    for key in SONAR_ANGLE_KEYS:
        value = _angle(raw, key)
        if value is not None:
            kwargs[key] = value
    for key in SONAR_FLOAT_KEYS:
        if key in raw:
            kwargs[key] = _float(raw, key)
    unknown = set(raw) - set(SONAR_FLOAT_KEYS) - set(SONAR_ANGLE_KEYS) - {f"{k}_deg" for k in SONAR_ANGLE_KEYS}
    if unknown:
        raise ConfigError(f"unknown key(s) in [SONAR]: {', '.join(sorted(unknown))}")
    return kwargs


def _scenario_kwargs(raw: Dict[str, str]) -> Dict[str, object]:
    raw = dict(raw)
    kwargs: Dict[str, object] = {}

    for key in ("case", "group"):
        if key in raw:
            kwargs[key] = raw.pop(key)
    for key in ("n_points", "trials", "seed"):
        if key in raw:
            kwargs[key] = _int(raw, key)
            raw.pop(key)
    for key in ("outlier_ratio", "translation_range", "p_value"):
        if key in raw:
            kwargs[key] = _float(raw, key)
            raw.pop(key)

    if "box_lo" in raw or "box_hi" in raw:
        default = Box()
        lo = _floats(raw, "box_lo", 3) if "box_lo" in raw else default.lo
        hi = _floats(raw, "box_hi", 3) if "box_hi" in raw else default.hi
        kwargs["box"] = Box(lo=lo, hi=hi)
        raw.pop("box_lo", None)
        raw.pop("box_hi", None)

    if "plane_anchor_x" in raw or "plane_anchor_y" in raw:
        default_x, default_y = ScenarioConfig.model_fields["plane_anchor_box"].default
        x = _floats(raw, "plane_anchor_x", 2) if "plane_anchor_x" in raw else default_x
        y = _floats(raw, "plane_anchor_y", 2) if "plane_anchor_y" in raw else default_y
        kwargs["plane_anchor_box"] = (x, y)
        raw.pop("plane_anchor_x", None)
        raw.pop("plane_anchor_y", None)

    tilt_min = _angle(raw, "plane_tilt_min")
    tilt_max = _angle(raw, "plane_tilt_max")
    if tilt_min is not None or tilt_max is not None:
        default_min, default_max = ScenarioConfig.model_fields["plane_tilt_range"].default
        kwargs["plane_tilt_range"] = (
            default_min if tilt_min is None else tilt_min,
            default_max if tilt_max is None else tilt_max,
        )
    for key in ("plane_tilt_min", "plane_tilt_max"):
        raw.pop(key, None)
        raw.pop(f"{key}_deg", None)

    if raw:
        raise ConfigError(f"unknown key(s) in [SCENARIO]: {', '.join(sorted(raw))}")
    return kwargs


def _angle(raw: Mapping[str, str], key: str) -> Optional[float]:
    """Reads ``key`` (radians) or ``key_deg`` (degrees); the degree form wins."""
    deg_key = f"{key}_deg"
    if deg_key in raw:
        return math.radians(_float(raw, deg_key))
    if key in raw:
        return _float(raw, key)
    return None


def _float(raw: Mapping[str, str], key: str) -> float:
    try:
        return float(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got '{raw[key]}'") from None


def _int(raw: Mapping[str, str], key: str) -> int:
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got '{raw[key]}'") from None


def _floats(raw: Mapping[str, str], key: str, count: int) -> tuple:
    parts = [p.strip() for p in raw[key].split(",") if p.strip()]
    if len(parts) != count:
        raise ConfigError(f"{key}: expected {count} comma-separated numbers, got '{raw[key]}'")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got '{raw[key]}'") from None


def _join(values) -> str:
    return ", ".join(repr(float(v)) for v in values)


def _describe_validation_error(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        field = ".".join(str(part) for part in item["loc"]) or "config"
        messages.append(f"{field}: {item['msg']}")
    return "; ".join(messages)
