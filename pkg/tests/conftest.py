import numpy as np
import pytest

from sonarclique.config.models import Case, ScenarioConfig, SonarConfig


@pytest.fixture
def sonar() -> SonarConfig:
    return SonarConfig()


@pytest.fixture
def noiseless_sonar() -> SonarConfig:
    return SonarConfig(sigma_r=0.0, sigma_theta=0.0, beta_r=0.0, beta_theta=0.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def general_scenario() -> ScenarioConfig:
    return ScenarioConfig(case=Case.GENERAL, n_points=30, outlier_ratio=0.5, trials=2, seed=7)


@pytest.fixture
def coplanar_scenario() -> ScenarioConfig:
    return ScenarioConfig(case=Case.COPLANAR, n_points=12, outlier_ratio=0.5, trials=2, seed=7)


@pytest.fixture
def config_file(tmp_path):
    """An INI file with only defaults, so tests never touch the user config directory."""
    path = tmp_path / "sonarclique.ini"
    path.write_text("[SCENARIO]\ncase = general\n", encoding="utf-8")
    return path
