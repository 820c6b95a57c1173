import logging

from sonarclique.clique.base import CliqueSolver, Graph
from sonarclique.clique.hyper import EXACT_LIMIT, HyperExactSolver, HyperPeelingSolver
from sonarclique.clique.simple import SimpleBranchAndBound
from sonarclique.compat.graphs import CompatibilityGraph, Hypergraph4

logger = logging.getLogger(__name__)


class SolverFactory:
    """
    Class responsible for instantiating clique solvers for a given graph.
    """

    @staticmethod
    def get_solver(graph: Graph, exact: bool = False) -> CliqueSolver:
        """
        Resolves the solver for the graph kind.

        Simple graphs are always solved exactly. Hypergraphs use the peeling
        heuristic unless ``exact`` is set and the graph is small enough for the
        exact search.
        """
        if isinstance(graph, CompatibilityGraph):
            return SimpleBranchAndBound()

        if isinstance(graph, Hypergraph4):
            if exact and graph.n <= EXACT_LIMIT:
                return HyperExactSolver()
            if exact:
                logger.warning("Hypergraph with %d vertices exceeds the exact limit; using the heuristic", graph.n)
            return HyperPeelingSolver()

        raise TypeError(f"unsupported graph type: {type(graph).__name__}")
