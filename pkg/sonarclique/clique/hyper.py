"""
Maximum hyperclique search on 4-uniform hypergraphs.

A hyperclique is a vertex set of size at least four whose every 4-subset is a
hyperedge.
"""
import itertools
import logging
from math import comb
from typing import Dict, List, Tuple

from sonarclique.clique.base import CliqueResult, CliqueSolver, verify_hyperclique
from sonarclique.compat.graphs import Hypergraph4
from sonarclique.errors import SolverLimitError

logger = logging.getLogger(__name__)

EXACT_LIMIT = 40


class HyperExactSolver(CliqueSolver):
    """
    Depth-first enumeration in lexicographic order with candidate sets kept as bitsets.
    The first largest hyperclique met is the lexicographically smallest one.
    """

    def __init__(self, limit: int = EXACT_LIMIT):
        self.limit = limit

    def solve(self, graph: Hypergraph4) -> CliqueResult:
        if graph.n > self.limit:
            raise SolverLimitError(f"use heuristic: {graph.n} vertices exceed the exact limit of {self.limit}")
        if not graph.hyperedges:
            return CliqueResult((), True)

        ext = graph.extension_masks()
        best: List[int] = []

        def expand(current: List[int], candidates: int) -> None:
            nonlocal best
            if len(current) >= 4 and len(current) > len(best):
                best = current.copy()
            while candidates:
                if len(current) + candidates.bit_count() <= len(best):
                    return
                low = candidates & -candidates
                v = low.bit_length() - 1
                candidates &= ~low

                narrowed = candidates
                for a, b in itertools.combinations(current, 2):
                    narrowed &= ext.get((a, b, v), 0)
                    if not narrowed:
                        break
                # a triple without extensions cannot grow into a hyperclique
                if len(current) == 2 and not narrowed:
                    continue
                current.append(v)
                expand(current, narrowed)
                current.pop()

        expand([], (1 << graph.n) - 1)
        result = CliqueResult(tuple(best), True)
        if not verify_hyperclique(graph, result.vertices):
            raise AssertionError("solver returned a set that is not a hyperclique")
        return result


class HyperPeelingSolver(CliqueSolver):
    """
    Peels the vertex of smallest hyperedge degree until the remaining vertices form
    a hyperclique, then re-inserts peeled vertices in reverse order where possible.
    """

    def solve(self, graph: Hypergraph4) -> CliqueResult:
        if not graph.hyperedges:
            return CliqueResult((), False)

        incident = graph.incidence()
        degree: Dict[int, int] = {v: len(edges) for v, edges in incident.items()}
        alive = {edge: True for edge in graph.hyperedges}
        alive_count = len(alive)
        remaining = set(range(graph.n))
        peeled: List[int] = []

        while alive_count > 0 and alive_count != comb(len(remaining), 4):
            # smallest degree first, larger index first on ties
            v = min(remaining, key=lambda x: (degree[x], -x))
            for edge in incident[v]:
                if alive[edge]:
                    alive[edge] = False
                    alive_count -= 1
                    for w in edge:
                        if w != v:
                            degree[w] -= 1
            remaining.remove(v)
            peeled.append(v)

        if alive_count == 0:
            return CliqueResult((), False)

        clique = sorted(remaining)
        for v in reversed(peeled):
            if self._extends(graph, incident, clique, v):
                clique = sorted(clique + [v])

        result = CliqueResult(tuple(clique), False)
        if not verify_hyperclique(graph, result.vertices):
            raise AssertionError("solver returned a set that is not a hyperclique")
        logger.debug("Peeling kept %d of %d vertices (%d re-inserted)",
                     len(clique), graph.n, len(clique) - len(remaining))
        return result

    @staticmethod
    def _extends(graph: Hypergraph4, incident: Dict[int, List[Tuple[int, ...]]], clique: List[int], v: int) -> bool:
        if len(incident[v]) < comb(len(clique), 3):
            return False
        return all(
            tuple(sorted(triple + (v,))) in graph.hyperedges
            for triple in itertools.combinations(clique, 3)
        )


def max_clique_hyper4_exact(h: Hypergraph4) -> CliqueResult:
    return HyperExactSolver().solve(h)


def max_clique_hyper4_heuristic(h: Hypergraph4) -> CliqueResult:
    return HyperPeelingSolver().solve(h)
