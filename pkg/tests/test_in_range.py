import math

import numpy as np
import pytest

from sonarclique.compat.in_range import (
    build_pairwise_graph,
    in_range_test,
    length_bounds_noiseless,
    length_bounds_noiseless_batch,
    length_bounds_noisy,
    length_bounds_noisy_batch,
    pairwise_adjacency,
)
from sonarclique.config.models import Box, SonarConfig
from sonarclique.errors import BoundsError
from sonarclique.geometry.sonar import (
    Correspondence,
    Measurement,
    WorldPoint,
    correspondences_to_arrays,
    project_batch,
)
from sonarclique.sim.scene import sample_box_fov


def test_equal_bearing_equal_range():
    phi = math.radians(7.0)
    bounds = length_bounds_noiseless(Measurement(2.0, 0.0), Measurement(2.0, 0.0), phi)
    assert bounds.lo == 0.0
    assert bounds.hi == pytest.approx(4.0 * math.sin(phi))


def test_equal_bearing_different_ranges():
    phi = math.radians(7.0)
    bounds = length_bounds_noiseless(Measurement(2.0, 0.3), Measurement(3.0, 0.3), phi)
    assert bounds.lo == pytest.approx(1.0, abs=1e-15)
    # extreme elevations of opposite sign
    assert bounds.hi == pytest.approx(math.sqrt(4.0 + 9.0 - 12.0 * math.cos(2.0 * phi)))


def test_right_angle_bearings():
    phi = math.radians(7.0)
    bounds = length_bounds_noiseless(Measurement(2.0, math.pi / 4), Measurement(2.0, -math.pi / 4), phi)
    assert bounds.lo == pytest.approx(2.0 * math.sqrt(2.0) * math.cos(phi))
    assert bounds.hi == pytest.approx(2.0 * math.sqrt(2.0) * math.sqrt(1.0 + math.sin(phi) ** 2))


def test_noiseless_rejects_non_positive_range():
    with pytest.raises(ValueError):
        length_bounds_noiseless(Measurement(0.0, 0.0), Measurement(1.0, 0.0), 0.1)


@pytest.mark.parametrize("phi_max", [0.0, -0.1, math.radians(10.5), float("nan")])
def test_noiseless_rejects_aperture_out_of_range(phi_max):
    with pytest.raises(ValueError, match="phi_max"):
        length_bounds_noiseless(Measurement(2.0, 0.0), Measurement(2.5, 0.1), phi_max)


def test_noiseless_accepts_widest_aperture():
    bounds = length_bounds_noiseless(Measurement(2.0, 0.0), Measurement(2.0, 0.0), math.radians(10.0))
    assert bounds.hi == pytest.approx(4.0 * math.sin(math.radians(10.0)))


def test_noiseless_bounds_are_sound(sonar):
    rng = np.random.default_rng(11)
    p = sample_box_fov(Box(), sonar, 20_000, rng)
    q = sample_box_fov(Box(), sonar, 20_000, rng)
    r_p, t_p = project_batch(p)
    r_q, t_q = project_batch(q)
    lo, hi = length_bounds_noiseless_batch(r_p, t_p, r_q, t_q, sonar.phi_max)
    length = np.linalg.norm(p - q, axis=1)
    assert np.all(lo <= length + 1e-12)
    assert np.all(length <= hi + 1e-12)


def test_noiseless_bounds_are_tight_on_elevation_grid():
    phi_max = math.radians(7.0)
    m_i, m_j = Measurement(2.0, math.radians(20.0)), Measurement(2.5, math.radians(-30.0))
    bounds = length_bounds_noiseless(m_i, m_j, phi_max)

    phi = np.linspace(-phi_max, phi_max, 2001)
    cos_i, cos_j = np.cos(phi)[:, None], np.cos(phi)[None, :]
    sin_i, sin_j = np.sin(phi)[:, None], np.sin(phi)[None, :]
    x = cos_i * cos_j * math.cos(m_i.theta - m_j.theta) + sin_i * sin_j
    length = np.sqrt(np.maximum(m_i.r ** 2 + m_j.r ** 2 - 2.0 * m_i.r * m_j.r * x, 0.0))

    assert length.min() == pytest.approx(bounds.lo, abs=1e-4)
    assert length.max() == pytest.approx(bounds.hi, abs=1e-4)
    # extremes sit at equal elevations for the lower bound, opposite for the upper
    lo_at = np.unravel_index(length.argmin(), length.shape)
    hi_at = np.unravel_index(length.argmax(), length.shape)
    assert abs(phi[lo_at[0]]) == pytest.approx(phi_max) and phi[lo_at[0]] == phi[lo_at[1]]
    assert abs(phi[hi_at[0]]) == pytest.approx(phi_max) and phi[hi_at[0]] == -phi[hi_at[1]]


def test_noisy_interval_widens_with_bounds(sonar):
    rng = np.random.default_rng(8)
    p = sample_box_fov(Box(), sonar, 500, rng)
    q = sample_box_fov(Box(), sonar, 500, rng)
    r_p, t_p = project_batch(p)
    r_q, t_q = project_batch(q)

    betas_r = [0.0, 0.005, 0.015, 0.03, 0.06]
    betas_theta = [math.radians(d) for d in (0.0, 0.5, 1.5, 3.0, 6.0)]

    def bounds(beta_r, beta_theta):
        cfg = sonar.model_copy(update={"beta_r": beta_r, "beta_theta": beta_theta})
        lo, hi, valid = length_bounds_noisy_batch(r_p, t_p, r_q, t_q, cfg)
        assert valid.all()
        return lo, hi

    for beta_theta in betas_theta:
        steps = [bounds(beta_r, beta_theta) for beta_r in betas_r]
        for (lo_a, hi_a), (lo_b, hi_b) in zip(steps, steps[1:]):
            assert np.all(lo_b <= lo_a + 1e-12)
            assert np.all(hi_a <= hi_b + 1e-12)
    for beta_r in betas_r:
        steps = [bounds(beta_r, beta_theta) for beta_theta in betas_theta]
        for (lo_a, hi_a), (lo_b, hi_b) in zip(steps, steps[1:]):
            assert np.all(lo_b <= lo_a + 1e-12)
            assert np.all(hi_a <= hi_b + 1e-12)


def test_noisy_interval_contains_noiseless(sonar):
    rng = np.random.default_rng(3)
    r_i, r_j = rng.uniform(1.0, 5.0, size=(2, 1000))
    t_i, t_j = rng.uniform(-1.0, 1.0, size=(2, 1000))
    lo, hi = length_bounds_noiseless_batch(r_i, t_i, r_j, t_j, sonar.phi_max)
    lo_n, hi_n, valid = length_bounds_noisy_batch(r_i, t_i, r_j, t_j, sonar)
    assert np.all(valid)
    assert np.all(lo_n <= lo + 1e-12)
    assert np.all(hi <= hi_n + 1e-12)


def test_zero_noise_bounds_match_noiseless(sonar):
    cfg = sonar.model_copy(update={"beta_r": 0.0, "beta_theta": 0.0})
    a, b = Measurement(2.0, 0.2), Measurement(2.7, -0.4)
    noiseless = length_bounds_noiseless(a, b, cfg.phi_max)
    noisy = length_bounds_noisy(a, b, cfg)
    assert noisy.lo == pytest.approx(noiseless.lo, abs=1e-12)
    assert noisy.hi == pytest.approx(noiseless.hi, abs=1e-12)


def test_bounded_noise_containment(sonar):
    rng = np.random.default_rng(21)
    n = 20_000
    p = sample_box_fov(Box(), sonar, n, rng)
    q = sample_box_fov(Box(), sonar, n, rng)
    r_p, t_p = project_batch(p)
    r_q, t_q = project_batch(q)
    # noise drawn inside the bounds
    r_p = r_p + rng.uniform(-sonar.beta_r, sonar.beta_r, n)
    r_q = r_q + rng.uniform(-sonar.beta_r, sonar.beta_r, n)
    t_p = t_p + rng.uniform(-sonar.beta_theta, sonar.beta_theta, n)
    t_q = t_q + rng.uniform(-sonar.beta_theta, sonar.beta_theta, n)
    lo, hi, valid = length_bounds_noisy_batch(r_p, t_p, r_q, t_q, sonar)
    length = np.linalg.norm(p - q, axis=1)
    contained = ~valid | ((lo <= length + 1e-12) & (length <= hi + 1e-12))
    assert contained.mean() >= 0.999


def test_wide_bearing_separation_raises(sonar):
    with pytest.raises(BoundsError):
        length_bounds_noisy(Measurement(2.0, 1.56), Measurement(2.0, -1.56), sonar)


def test_wide_bearing_separation_is_accepted(sonar):
    c_i = Correspondence(WorldPoint(0.0, 0.0, 0.0), Measurement(2.0, 1.56), 0)
    c_j = Correspondence(WorldPoint(100.0, 0.0, 0.0), Measurement(2.0, -1.56), 1)
    assert in_range_test(c_i, c_j, sonar)


def test_in_range_rejects_gross_mismatch(sonar):
    c_i = Correspondence(WorldPoint(0.0, 0.0, 0.0), Measurement(2.0, 0.0), 0)
    c_j = Correspondence(WorldPoint(5.0, 0.0, 0.0), Measurement(2.1, 0.05), 1)
    assert not in_range_test(c_i, c_j, sonar)


def test_in_range_symmetric(sonar, rng):
    for _ in range(200):
        c_i = Correspondence(WorldPoint(*rng.uniform(-1, 1, 3)), Measurement(rng.uniform(1, 4), rng.uniform(-1, 1)), 0)
        c_j = Correspondence(WorldPoint(*rng.uniform(-1, 1, 3)), Measurement(rng.uniform(1, 4), rng.uniform(-1, 1)), 1)
        assert in_range_test(c_i, c_j, sonar) == in_range_test(c_j, c_i, sonar)


def test_noiseless_inliers_form_complete_graph(rng):
    cfg = SonarConfig(sigma_r=0.0, sigma_theta=0.0)
    points = sample_box_fov(Box(), cfg, 40, rng)
    r, theta = project_batch(points)
    corrs = [Correspondence(WorldPoint(*p), Measurement(ri, ti), k)
             for k, (p, ri, ti) in enumerate(zip(points, r, theta))]
    graph = build_pairwise_graph(corrs, cfg)
    assert len(graph.edges) == 40 * 39 // 2


def test_adjacency_independent_of_workers(sonar):
    rng = np.random.default_rng(8)
    n = 400
    world = rng.uniform(-1, 1, size=(n, 3))
    r = rng.uniform(1.6, 3.0, size=n)
    theta = rng.uniform(-1.0, 1.0, size=n)
    single = pairwise_adjacency(world, r, theta, sonar, workers=1)
    pooled = pairwise_adjacency(world, r, theta, sonar, workers=4)
    np.testing.assert_array_equal(single, pooled)
    np.testing.assert_array_equal(single, single.T)
    assert not single.diagonal().any()


def test_graph_vertices_follow_list_order(sonar):
    corrs = [
        Correspondence(WorldPoint(0.0, 0.0, 0.0), Measurement(2.0, 0.0), 10),
        Correspondence(WorldPoint(0.0, 0.1, 0.0), Measurement(2.1, 0.0), 20),
        Correspondence(WorldPoint(9.0, 0.0, 0.0), Measurement(2.0, 0.01), 30),
    ]
    world, _, _ = correspondences_to_arrays(corrs)
    assert world.shape == (3, 3)
    assert build_pairwise_graph(corrs, sonar).edges == frozenset({(0, 1)})
