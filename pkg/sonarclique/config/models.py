import itertools
import math
from enum import Enum
from typing import Any, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Upper bound on the elevation half-aperture for the small-elevation approximations.
PHI_MAX_LIMIT = math.radians(10.0) + 1e-12


def _normalize_name(v: Any) -> Any:
    if isinstance(v, str):
        return v.lower().strip().replace("-", "_").replace(" ", "_")
    return v


class Case(str, Enum):
    GENERAL = "general"
    COPLANAR = "coplanar"


class Group(str, Enum):
    STANDARD = "standard"
    REDUCED_BOUND = "reduced_bound"
    EXPANDED_BOUND = "expanded_bound"
    HALF_SCALE = "half_scale"
    QUARTER_SCALE = "quarter_scale"
    UNDERESTIMATED = "underestimated"
    OVERESTIMATED = "overestimated"
    NO_APPROX = "no_approx"
    WITH_IN_RANGE = "with_in_range"


GENERAL_GROUPS = frozenset({
    Group.STANDARD, Group.REDUCED_BOUND, Group.EXPANDED_BOUND, Group.HALF_SCALE, Group.QUARTER_SCALE,
})
COPLANAR_GROUPS = frozenset({
    Group.STANDARD, Group.UNDERESTIMATED, Group.OVERESTIMATED, Group.NO_APPROX, Group.WITH_IN_RANGE,
})


class SonarConfig(BaseModel):
    """
    Field of view, noise model and noise bounds of a 2D forward-looking sonar.

    All angles are radians. ``sigma_*`` describe the measurement noise, ``beta_*``
    are the bounds used by the bounded-noise expansion of the in-range test.
    """
    model_config = ConfigDict(frozen=True)

    theta_max: float = Field(default=math.radians(65.0), gt=0.0, lt=math.pi / 2)
    phi_max: float = Field(default=math.radians(7.0), gt=0.0)
    r_min: float = Field(default=0.5, gt=0.0)
    r_max: float = 10.0
    sigma_r: float = Field(default=0.005, ge=0.0)
    sigma_theta: float = Field(default=math.radians(0.5), ge=0.0)
    beta_r: float = Field(default=0.015, ge=0.0)
    beta_theta: float = Field(default=math.radians(1.5), ge=0.0)

    @field_validator("phi_max")
    @classmethod
    def validate_phi_max(cls, v: float) -> float:
        if v > PHI_MAX_LIMIT:
            raise ValueError("phi_max must not exceed 10 degrees")
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "SonarConfig":
        if self.r_max <= self.r_min:
            raise ValueError("r_max must be greater than r_min")
        if self.beta_theta > 0.1 * 2.0 * self.theta_max:
            raise ValueError("beta_theta must be much smaller than the bearing field of view")
        return self

    def with_bounds_from_sigma(self, factor: float = 3.0) -> "SonarConfig":
        """Return a copy with ``beta = factor * sigma`` for both range and bearing."""
        return self.model_copy(update={
            "beta_r": factor * self.sigma_r,
            "beta_theta": factor * self.sigma_theta,
        })


class Box(BaseModel):
    """Axis-aligned 3D box in sonar coordinates (meters)."""
    model_config = ConfigDict(frozen=True)

    lo: Tuple[float, float, float] = (-0.6, 1.6, -0.3)
    hi: Tuple[float, float, float] = (0.6, 2.8, 0.3)

    @model_validator(mode="after")
    def validate_extent(self) -> "Box":
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError("box upper corner must exceed lower corner on every axis")
        return self

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lo) + np.asarray(self.hi))

    @property
    def size(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    def scaled(self, factor: float) -> "Box":
        """Scale every edge length by ``factor`` about the box center."""
        half = 0.5 * factor * self.size
        c = self.center
        return Box(lo=tuple(float(x) for x in c - half), hi=tuple(float(x) for x in c + half))

    def corners(self) -> np.ndarray:
        return np.array(list(itertools.product(*zip(self.lo, self.hi))))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=(n, 3))


class ScenarioConfig(BaseModel):
    """Settings of one simulated experiment cell (case, group, outlier ratio)."""
    case: Case = Case.GENERAL
    box: Box = Box()
    n_points: int = Field(default=100, ge=4)
    outlier_ratio: float = Field(default=0.8, ge=0.0, lt=1.0)
    group: Group = Group.STANDARD
    trials: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    sonar: SonarConfig = SonarConfig()
    plane_anchor_box: Tuple[Tuple[float, float], Tuple[float, float]] = ((-0.15, 0.15), (2.05, 2.35))
    plane_tilt_range: Tuple[float, float] = (math.radians(5.0), math.radians(70.0))
    translation_range: float = Field(default=5.0, ge=0.0)
    p_value: float = Field(default=0.01, gt=0.0, lt=1.0)

    @field_validator("case", "group", mode="before")
    @classmethod
    def normalize_enum(cls, v: Any) -> Any:
        return _normalize_name(v)

    @field_validator("plane_tilt_range")
    @classmethod
    def validate_tilt(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if not 0.0 <= v[0] <= v[1] < math.pi / 2:
            raise ValueError("plane_tilt_range must satisfy 0 <= min <= max < 90 degrees")
        return v

    @model_validator(mode="after")
    def validate_group_for_case(self) -> "ScenarioConfig":
        allowed = GENERAL_GROUPS if self.case is Case.GENERAL else COPLANAR_GROUPS
        if self.group not in allowed:
            raise ValueError(f"group '{self.group.value}' is not valid for case '{self.case.value}'")
        return self


class RunConfig(BaseModel):
    """Execution settings that do not change results."""
    threads: int = Field(default=8, ge=1)
    out: Optional[str] = None
    format: str = "csv"

    @field_validator("format", mode="before")
    @classmethod
    def normalize_format(cls, v: Any) -> Any:
        v = _normalize_name(v)
        if v not in ("csv", "json", "md"):
            raise ValueError("format must be one of csv, json, md")
        return v


class AppConfig(BaseModel):
    """Configuration object containing all settings of a run."""
    scenario: ScenarioConfig = ScenarioConfig()
    run: RunConfig = RunConfig()
