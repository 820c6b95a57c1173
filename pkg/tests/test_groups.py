import math

import numpy as np
import pytest

from sonarclique.config.models import Case, Group, ScenarioConfig, SonarConfig
from sonarclique.errors import ConfigError
from sonarclique.sim.groups import apply_group


def _params(case: Case, group: Group):
    return apply_group(ScenarioConfig(case=case, group=group))


def test_standard_group_uses_three_sigma_bounds():
    params = _params(Case.GENERAL, Group.STANDARD)
    assert params.est_sonar.beta_r == pytest.approx(0.015)
    assert params.est_sonar.beta_theta == pytest.approx(math.radians(1.5))
    assert params.truth_sonar == params.est_sonar
    assert params.use_r_approx
    assert not params.with_in_range


@pytest.mark.parametrize("group, factor", [(Group.REDUCED_BOUND, 1.0), (Group.EXPANDED_BOUND, 9.0)])
def test_bound_groups(group, factor):
    params = _params(Case.GENERAL, group)
    sonar = SonarConfig()
    assert params.est_sonar.beta_r == pytest.approx(factor * sonar.sigma_r)
    assert params.est_sonar.beta_theta == pytest.approx(factor * sonar.sigma_theta)
    assert params.est_sonar.sigma_r == sonar.sigma_r


@pytest.mark.parametrize("group, factor", [(Group.HALF_SCALE, 0.5), (Group.QUARTER_SCALE, 0.25)])
def test_scale_groups_shrink_box_about_center(group, factor):
    base = ScenarioConfig().box
    box = _params(Case.GENERAL, group).box
    np.testing.assert_allclose(box.size, factor * base.size)
    np.testing.assert_allclose(box.center, base.center)


@pytest.mark.parametrize("group, factor", [(Group.UNDERESTIMATED, 1.0 / 3.0), (Group.OVERESTIMATED, 3.0)])
def test_sigma_groups_change_the_assumed_noise_only(group, factor):
    params = _params(Case.COPLANAR, group)
    sonar = SonarConfig()
    assert params.truth_sonar == sonar
    assert params.est_sonar.sigma_r == pytest.approx(factor * sonar.sigma_r)
    assert params.est_sonar.sigma_theta == pytest.approx(factor * sonar.sigma_theta)


def test_coplanar_flags():
    assert not _params(Case.COPLANAR, Group.NO_APPROX).use_r_approx
    assert _params(Case.COPLANAR, Group.WITH_IN_RANGE).with_in_range


def test_group_outside_its_case_is_rejected():
    cfg = ScenarioConfig(case=Case.COPLANAR).model_copy(update={"group": Group.HALF_SCALE})
    with pytest.raises(ConfigError, match="not valid"):
        apply_group(cfg)


def test_expanded_bound_too_wide_for_fov():
    sonar = SonarConfig(theta_max=math.radians(10.0), sigma_theta=math.radians(0.5))
    with pytest.raises(ConfigError, match="invalid noise bounds"):
        apply_group(ScenarioConfig(group=Group.EXPANDED_BOUND, sonar=sonar))
