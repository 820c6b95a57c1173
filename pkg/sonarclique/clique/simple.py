"""
Exact maximum clique for simple compatibility graphs.

Branch and bound over bitset neighbourhoods with a greedy colouring upper bound;
vertices are relabelled in degeneracy order before the search.
"""
import logging
from typing import List, Optional

import numpy as np

from sonarclique.clique.base import CliqueResult, CliqueSolver, verify_clique
from sonarclique.compat.graphs import CompatibilityGraph

logger = logging.getLogger(__name__)


def degeneracy_order(adjacency: np.ndarray) -> np.ndarray:
    """
    Smallest-last elimination order: repeatedly remove a vertex of minimum remaining
    degree (smallest index on ties).
    """
    n = adjacency.shape[0]
    degree = adjacency.sum(axis=1).astype(np.int64)
    removed = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.intp)
    big = np.iinfo(np.int64).max
    for k in range(n):
        v = int(np.argmin(np.where(removed, big, degree)))
        order[k] = v
        removed[v] = True
        degree -= adjacency[v]
    return order


def _bitset_rows(adjacency: np.ndarray) -> List[int]:
    packed = np.packbits(adjacency, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class _BitsetSearch:
    def __init__(self, adj: List[int]):
        self.adj = adj
        self.best: List[int] = []
        self.floor = 0
        self.target: Optional[int] = None

    def search(self, candidates: int, need: Optional[int] = None) -> List[int]:
        """
        Largest clique inside ``candidates``; with ``need`` set, stops at the first
        clique of at least that size and gives up on branches that cannot reach it.
        """
        self.best = []
        self.target = need
        self.floor = max(need - 1, 0) if need is not None else 0
        if need is not None and (need <= 0 or candidates.bit_count() < need):
            return []
        if candidates:
            self._expand([], candidates)
        return self.best

    def _done(self) -> bool:
        return self.target is not None and len(self.best) >= self.target

    def _color_sort(self, candidates: int):
        order: List[int] = []
        colors: List[int] = []
        color = 0
        uncolored = candidates
        while uncolored:
            color += 1
            q = uncolored
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low
                q &= ~self.adj[v]
                uncolored &= ~low
                order.append(v)
                colors.append(color)
        return order, colors

    def _expand(self, current: List[int], candidates: int) -> None:
        order, colors = self._color_sort(candidates)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + colors[idx] <= max(len(self.best), self.floor):
                return
            v = order[idx]
            current.append(v)
            narrowed = candidates & self.adj[v]
            if narrowed:
                self._expand(current, narrowed)
            elif len(current) > len(self.best):
                self.best = current.copy()
            current.pop()
            if self._done():
                return
            candidates &= ~(1 << v)


class SimpleBranchAndBound(CliqueSolver):
    """
    Exact maximum clique; among maximum cliques the lexicographically smallest
    sorted vertex list is returned.
    """

    def solve(self, graph: CompatibilityGraph) -> CliqueResult:
        n = graph.n
        if n == 0:
            return CliqueResult((), True)

        adjacency = graph.adjacency_matrix()
        order = degeneracy_order(adjacency)[::-1]
        pos = np.empty(n, dtype=np.intp)
        pos[order] = np.arange(n)
        adj = _bitset_rows(adjacency[np.ix_(order, order)])
        search = _BitsetSearch(adj)

        full = (1 << n) - 1
        best = search.search(full)
        omega = len(best)

        # above[u]: relabelled bits of all vertices with original index > u
        above = [0] * n
        for u in range(n - 2, -1, -1):
            above[u] = above[u + 1] | (1 << int(pos[u + 1]))

        chosen: List[int] = []
        witness = sorted(int(order[v]) for v in best)
        candidates = full
        start = 0
        while len(chosen) < omega:
            need = omega - len(chosen) - 1
            for u in range(start, n):
                bit = 1 << int(pos[u])
                if not candidates & bit:
                    continue
                narrowed = candidates & adj[int(pos[u])] & above[u]
                if len(witness) > len(chosen) and witness[len(chosen)] == u:
                    break
                found = search.search(narrowed, need)
                if len(found) >= need:
                    witness = chosen + [u] + sorted(int(order[v]) for v in found)
                    break
            else:
                raise AssertionError("lexicographic refinement lost the maximum clique")
            chosen.append(u)
            candidates = narrowed
            start = u + 1

        result = CliqueResult(tuple(chosen), True)
        if not verify_clique(graph, result.vertices):
            raise AssertionError("solver returned a set that is not a clique")
        logger.debug("Maximum clique of size %d on %d vertices", omega, n)
        return result


def max_clique_simple(g: CompatibilityGraph) -> CliqueResult:
    return SimpleBranchAndBound().solve(g)
