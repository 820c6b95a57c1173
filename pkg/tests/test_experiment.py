import numpy as np
import pytest

from sonarclique.config.models import Group
from sonarclique.errors import ConfigError
from sonarclique.sim.experiment import AGGREGATE, run_experiment, summarize, trial_rng

TIMINGS = {"time_test_ms", "time_clique_ms", "time_total_ms"}


def _without_timings(table):
    return [row.model_dump(exclude=TIMINGS) for row in table.rows]


def test_rows_per_cell(general_scenario):
    table = run_experiment(general_scenario, ["standard"], [0.5], threads=1)
    assert [row.trial for row in table.rows] == [0, 1, AGGREGATE]
    assert len(table.trial_rows()) == 2
    agg = table.aggregate_rows()[0]
    assert agg.tpr == pytest.approx(np.mean([row.tpr for row in table.trial_rows()]))
    assert agg.case == "general" and agg.group == "standard" and agg.outlier_ratio == 0.5


def test_grid_order(general_scenario):
    table = run_experiment(general_scenario, [Group.STANDARD, "half-scale"], [0.2, 0.6])
    cells = [(s.group, s.outlier_ratio) for s in table.summaries]
    assert cells == [("standard", 0.2), ("standard", 0.6), ("half_scale", 0.2), ("half_scale", 0.6)]
    assert table.summary("half_scale", 0.6).trials == 2


def test_experiment_is_reproducible(general_scenario):
    a = run_experiment(general_scenario, ["standard"], [0.5])
    b = run_experiment(general_scenario, ["standard"], [0.5], threads=4)
    assert _without_timings(a) == _without_timings(b)


def test_process_pool_matches_serial(general_scenario):
    serial = run_experiment(general_scenario, ["standard"], [0.5])
    pooled = run_experiment(general_scenario, ["standard"], [0.5], jobs=2)
    assert _without_timings(serial) == _without_timings(pooled)


def test_empty_grid(general_scenario):
    with pytest.raises(ValueError):
        run_experiment(general_scenario, [], [0.5])
    with pytest.raises(ValueError):
        run_experiment(general_scenario, ["standard"], [])


def test_group_of_other_case(general_scenario):
    with pytest.raises(ConfigError):
        run_experiment(general_scenario, ["no_approx"], [0.5])


def test_missing_table_cell(general_scenario):
    table = run_experiment(general_scenario, ["standard"], [0.5])
    with pytest.raises(KeyError):
        table.summary("standard", 0.9)


def test_summarize_skips_missing_values():
    s = summarize([1.0, None, 3.0, 2.0, 4.0])
    assert s.mean == pytest.approx(2.5)
    assert s.median == pytest.approx(2.5)
    assert s.q25 == pytest.approx(1.75)
    assert s.q75 == pytest.approx(3.25)
    assert summarize([None, None]).mean is None


def test_trial_rng_is_keyed_by_seed_and_trial():
    assert trial_rng(3, 1).random() == trial_rng(3, 1).random()
    assert trial_rng(3, 1).random() != trial_rng(3, 2).random()
    assert trial_rng(3, 1).random() != trial_rng(4, 1).random()
