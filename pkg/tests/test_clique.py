import itertools

import networkx as nx
import numpy as np
import pytest

from helpers import brute_force_max_hyperclique, random_4_subsets
from sonarclique.clique import (
    HyperExactSolver,
    HyperPeelingSolver,
    SimpleBranchAndBound,
    SolverFactory,
    max_clique_hyper4_exact,
    max_clique_hyper4_heuristic,
    max_clique_simple,
    verify_clique,
    verify_hyperclique,
)
from sonarclique.compat.graphs import CompatibilityGraph, Hypergraph4
from sonarclique.errors import SolverLimitError


def _random_graph(n: int, p: float, rng: np.random.Generator) -> CompatibilityGraph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return CompatibilityGraph.from_adjacency(upper | upper.T)


def _networkx_best(g: CompatibilityGraph):
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_edges_from(g.edges)
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(nx_graph)]
    size = max(len(c) for c in cliques)
    return min(c for c in cliques if len(c) == size)


def _complete_hypergraph(n: int, vertices) -> Hypergraph4:
    return Hypergraph4(n, frozenset(itertools.combinations(sorted(vertices), 4)))


def _planted_hypergraph(n: int, planted: int, extra: int, rng: np.random.Generator):
    clique = sorted(rng.choice(n, size=planted, replace=False).tolist())
    edges = set(itertools.combinations(clique, 4))
    edges |= set(map(tuple, random_4_subsets(n, extra, rng).tolist()))
    return Hypergraph4(n, frozenset(edges)), clique


def _random_hypergraph(n: int, planted: int, extra: int, rng: np.random.Generator) -> Hypergraph4:
    return _planted_hypergraph(n, planted, extra, rng)[0]


# ---------------------------------------------------------------------------
# simple graphs
# ---------------------------------------------------------------------------


def test_complete_graph():
    g = CompatibilityGraph(5, frozenset(itertools.combinations(range(5), 2)))
    result = max_clique_simple(g)
    assert result.vertices == (0, 1, 2, 3, 4)
    assert result.is_certified_maximum


def test_edgeless_graph_returns_first_vertex():
    assert max_clique_simple(CompatibilityGraph(5)).vertices == (0,)


def test_empty_graph():
    result = max_clique_simple(CompatibilityGraph(0))
    assert result.vertices == ()
    assert len(result) == 0


def test_lexicographic_tie_break():
    # two disjoint triangles; the one with smaller labels wins
    g = CompatibilityGraph(6, frozenset({(3, 4), (3, 5), (4, 5), (0, 1), (0, 2), (1, 2)}))
    assert max_clique_simple(g).vertices == (0, 1, 2)
    g = CompatibilityGraph(6, frozenset({(1, 4), (1, 5), (4, 5), (0, 2), (0, 3), (2, 3)}))
    assert max_clique_simple(g).vertices == (0, 2, 3)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_matches_networkx(p):
    rng = np.random.default_rng(int(p * 100))
    for _ in range(70):
        n = int(rng.integers(1, 31))
        g = _random_graph(n, p, rng)
        result = SimpleBranchAndBound().solve(g)
        assert verify_clique(g, result.vertices)
        assert result.vertices == _networkx_best(g)


def test_planted_clique_is_found():
    rng = np.random.default_rng(4)
    n = 300
    g = _random_graph(n, 0.1, rng)
    planted = sorted(rng.choice(n, size=25, replace=False).tolist())
    g = CompatibilityGraph(n, g.edges | frozenset(itertools.combinations(planted, 2)))
    assert max_clique_simple(g).vertices == tuple(planted)


def test_simple_solver_is_deterministic(rng):
    g = _random_graph(40, 0.5, rng)
    assert max_clique_simple(g) == max_clique_simple(g)


# ---------------------------------------------------------------------------
# 4-uniform hypergraphs
# ---------------------------------------------------------------------------


def test_exact_complete_hypergraph():
    result = max_clique_hyper4_exact(_complete_hypergraph(6, range(6)))
    assert result.vertices == (0, 1, 2, 3, 4, 5)
    assert result.is_certified_maximum


def test_exact_single_hyperedge():
    assert max_clique_hyper4_exact(Hypergraph4(10, frozenset({(0, 1, 2, 3)}))).vertices == (0, 1, 2, 3)


def test_exact_without_hyperedges():
    result = max_clique_hyper4_exact(Hypergraph4(10))
    assert result.vertices == ()
    assert result.is_certified_maximum


def test_exact_size_guard():
    with pytest.raises(SolverLimitError, match="use heuristic"):
        HyperExactSolver().solve(Hypergraph4(41, frozenset({(0, 1, 2, 3)})))


def test_exact_lexicographic_tie_break():
    h = Hypergraph4(10, _complete_hypergraph(10, (5, 6, 7, 8, 9)).hyperedges
                    | _complete_hypergraph(10, (1, 2, 3, 4, 8)).hyperedges)
    assert max_clique_hyper4_exact(h).vertices == (1, 2, 3, 4, 8)


def test_exact_matches_enumeration():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n = int(rng.integers(6, 21))
        planted = int(rng.integers(4, min(n, 9) + 1))
        h = _random_hypergraph(n, planted, int(rng.integers(0, 400)), rng)
        result = max_clique_hyper4_exact(h)
        assert verify_hyperclique(h, result.vertices)
        assert result.vertices == brute_force_max_hyperclique(h)


def test_exact_is_monotone_in_hyperedges():
    rng = np.random.default_rng(23)
    for _ in range(30):
        h = _random_hypergraph(14, 5, 150, rng)
        extra = tuple(sorted(rng.choice(14, size=4, replace=False).tolist()))
        bigger = Hypergraph4(14, h.hyperedges | {extra})
        assert len(max_clique_hyper4_exact(bigger)) >= len(max_clique_hyper4_exact(h))


def test_heuristic_without_hyperedges():
    result = max_clique_hyper4_heuristic(Hypergraph4(10))
    assert result.vertices == ()
    assert not result.is_certified_maximum


def test_heuristic_complete_hypergraph():
    assert max_clique_hyper4_heuristic(_complete_hypergraph(7, range(7))).vertices == tuple(range(7))


def test_heuristic_is_valid_and_dominated():
    rng = np.random.default_rng(29)
    for _ in range(60):
        n = int(rng.integers(6, 21))
        h = _random_hypergraph(n, int(rng.integers(4, min(n, 9) + 1)), int(rng.integers(0, 400)), rng)
        heuristic = HyperPeelingSolver().solve(h)
        assert not heuristic.is_certified_maximum
        assert verify_hyperclique(h, heuristic.vertices)
        assert len(heuristic) <= len(HyperExactSolver().solve(h))


def test_heuristic_recovers_planted_hyperclique():
    rng = np.random.default_rng(31)
    recovered = 0
    for _ in range(10):
        h, planted = _planted_hypergraph(60, 12, 2000, rng)
        result = max_clique_hyper4_heuristic(h)
        assert verify_hyperclique(h, result.vertices)
        recovered += len(set(result.vertices) & set(planted)) >= 0.9 * 12
    assert recovered >= 9


# ---------------------------------------------------------------------------
# factory
# ---------------------------------------------------------------------------


def test_factory_picks_solver():
    assert isinstance(SolverFactory.get_solver(CompatibilityGraph(3)), SimpleBranchAndBound)
    assert isinstance(SolverFactory.get_solver(Hypergraph4(10)), HyperPeelingSolver)
    assert isinstance(SolverFactory.get_solver(Hypergraph4(10), exact=True), HyperExactSolver)


def test_factory_falls_back_above_limit(caplog):
    solver = SolverFactory.get_solver(Hypergraph4(41), exact=True)
    assert isinstance(solver, HyperPeelingSolver)
    assert "exceeds the exact limit" in caplog.text


def test_factory_rejects_unknown_graph():
    with pytest.raises(TypeError):
        SolverFactory.get_solver(object())
