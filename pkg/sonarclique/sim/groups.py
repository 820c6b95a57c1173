import logging
from typing import NamedTuple

from pydantic import ValidationError

from sonarclique.config.models import COPLANAR_GROUPS, GENERAL_GROUPS, Box, Case, Group, ScenarioConfig, SonarConfig
from sonarclique.errors import ConfigError

logger = logging.getLogger(__name__)

BOUND_FACTOR = 3.0

_BOUND_SCALE = {
    Group.REDUCED_BOUND: 1.0 / 3.0,
    Group.EXPANDED_BOUND: 3.0,
}
_BOX_SCALE = {
    Group.HALF_SCALE: 0.5,
    Group.QUARTER_SCALE: 0.25,
}
_SIGMA_SCALE = {
    Group.UNDERESTIMATED: 1.0 / 3.0,
    Group.OVERESTIMATED: 3.0,
}


class EffectiveParams(NamedTuple):
    """
    Parameters a trial actually runs with.

    ``truth_sonar`` generates the measurements, ``est_sonar`` carries the noise
    statistics and bounds the compatibility tests assume.
    """
    truth_sonar: SonarConfig
    est_sonar: SonarConfig
    box: Box
    use_r_approx: bool
    with_in_range: bool


def apply_group(cfg: ScenarioConfig) -> EffectiveParams:
    allowed = GENERAL_GROUPS if cfg.case is Case.GENERAL else COPLANAR_GROUPS
    if cfg.group not in allowed:
        raise ConfigError(f"group: '{cfg.group.value}' is not valid for case '{cfg.case.value}'")

    truth = cfg.sonar
    est = truth
    if cfg.group in _SIGMA_SCALE:
        scale = _SIGMA_SCALE[cfg.group]
        est = est.model_copy(update={"sigma_r": scale * truth.sigma_r, "sigma_theta": scale * truth.sigma_theta})

    try:
        est = SonarConfig.model_validate(
            est.with_bounds_from_sigma(BOUND_FACTOR * _BOUND_SCALE.get(cfg.group, 1.0)).model_dump())
    except ValidationError as e:
        raise ConfigError(f"group '{cfg.group.value}' yields invalid noise bounds: {e}") from e

    box = cfg.box.scaled(_BOX_SCALE[cfg.group]) if cfg.group in _BOX_SCALE else cfg.box
    params = EffectiveParams(
        truth_sonar=truth,
        est_sonar=est,
        box=box,
        use_r_approx=cfg.group is not Group.NO_APPROX,
        with_in_range=cfg.group is Group.WITH_IN_RANGE,
    )
    logger.debug("Group %s: beta_r=%.4g beta_theta=%.4g sigma_r=%.4g", cfg.group.value,
                 est.beta_r, est.beta_theta, est.sigma_r)
    return params
