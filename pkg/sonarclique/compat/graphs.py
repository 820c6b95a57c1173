import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np


@dataclass(frozen=True)
class CompatibilityGraph:
    """Simple undirected graph over correspondence indices ``0..n-1``."""
    n: int
    edges: FrozenSet[Tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        normalized = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_adjacency(cls, adjacency: np.ndarray) -> "CompatibilityGraph":
        adjacency = np.asarray(adjacency, dtype=bool)
        i, j = np.nonzero(np.triu(adjacency, k=1))
        return cls(adjacency.shape[0], frozenset(zip(i.tolist(), j.tolist())))

    def adjacency_matrix(self) -> np.ndarray:
        adjacency = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            idx = np.array(sorted(self.edges))
            adjacency[idx[:, 0], idx[:, 1]] = True
            adjacency[idx[:, 1], idx[:, 0]] = True
        return adjacency


@dataclass(frozen=True)
class Hypergraph4:
    """4-uniform hypergraph over correspondence indices ``0..n-1``; hyperedges are sorted 4-tuples."""
    n: int
    hyperedges: FrozenSet[Tuple[int, int, int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        normalized = set()
        for edge in self.hyperedges:
            edge = tuple(sorted(int(v) for v in edge))
            if len(edge) != 4 or len(set(edge)) != 4:
                raise ValueError(f"hyperedge {edge} must contain four distinct vertices")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise ValueError(f"hyperedge {edge} out of range for n={self.n}")
            normalized.add(edge)
        object.__setattr__(self, "hyperedges", frozenset(normalized))

    @classmethod
    def from_array(cls, n: int, tuples: np.ndarray) -> "Hypergraph4":
        tuples = np.asarray(tuples, dtype=int).reshape(-1, 4)
        return cls(n, frozenset(map(tuple, np.sort(tuples, axis=1).tolist())))

    def incidence(self) -> Dict[int, List[Tuple[int, int, int, int]]]:
        incident: Dict[int, List[Tuple[int, int, int, int]]] = {v: [] for v in range(self.n)}
        for edge in sorted(self.hyperedges):
            for v in edge:
                incident[v].append(edge)
        return incident

    def extension_masks(self) -> Dict[Tuple[int, int, int], int]:
        """
        Maps every sorted triple contained in a hyperedge to a bitset of the vertices
        completing it to a hyperedge.
        """
        ext: Dict[Tuple[int, int, int], int] = {}
        for edge in self.hyperedges:
            for k in range(4):
                triple = edge[:k] + edge[k + 1:]
                ext[triple] = ext.get(triple, 0) | (1 << edge[k])
        return ext

    def is_hyperclique(self, vertices: Iterable[int]) -> bool:
        return all(t in self.hyperedges for t in itertools.combinations(sorted(vertices), 4))
