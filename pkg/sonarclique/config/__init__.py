from .config_loader import ConfigLoader, dump_config, parse_config, parse_config_text
from .models import AppConfig, Box, Case, Group, RunConfig, ScenarioConfig, SonarConfig

__all__ = [
    "AppConfig",
    "Box",
    "Case",
    "ConfigLoader",
    "Group",
    "RunConfig",
    "ScenarioConfig",
    "SonarConfig",
    "dump_config",
    "parse_config",
    "parse_config_text",
]
