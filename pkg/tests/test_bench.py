import numpy as np
import pytest

from sonarclique.sim.bench import PHASES, loglog_slope, timing_benchmark


def test_slope_of_power_law():
    sizes = [50, 100, 200, 400]
    assert loglog_slope(sizes, [3e-4 * n ** 2 for n in sizes]) == pytest.approx(2.0)


def test_slope_needs_two_sizes():
    assert loglog_slope([100], [1.0]) is None
    assert loglog_slope([100, 100], [1.0, 2.0]) is None
    assert loglog_slope([100, 200], [0.0, 1.0]) is None


def test_benchmark_table():
    table = timing_benchmark("general", [20, 40], trials=2, threads=2)
    assert [row.n for row in table.rows] == [20, 40]
    for row in table.rows:
        assert row.case == "general" and row.trials == 2
        assert row.time_total_ms == pytest.approx(row.time_test_ms + row.time_clique_ms)
    assert set(table.slopes) == set(PHASES)
    assert all(np.isfinite(s) for s in table.slopes.values() if s is not None)


def test_coplanar_benchmark():
    table = timing_benchmark("coplanar", [10], trials=1, threads=1)
    assert table.rows[0].case == "coplanar"
    assert table.slopes["time_total_ms"] is None
