import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

from sonarclique.compat.graphs import CompatibilityGraph, Hypergraph4

Graph = Union[CompatibilityGraph, Hypergraph4]


@dataclass(frozen=True)
class CliqueResult:
    """Estimated inlier set: sorted vertex indices and whether the set is provably maximum."""
    vertices: Tuple[int, ...]
    is_certified_maximum: bool

    def __len__(self) -> int:
        return len(self.vertices)


class CliqueSolver(ABC):
    """
    Abstract base class acting as a contract for all maximum-clique solvers.
    """

    @abstractmethod
    def solve(self, graph: Graph) -> CliqueResult:
        """
        Finds a clique (or hyperclique) of the given graph.

        :param graph: The compatibility graph or 4-uniform hypergraph to search.
        :return: The clique found; ``is_certified_maximum`` tells whether it is maximum.
        """
        pass


def verify_clique(graph: CompatibilityGraph, vertices: Iterable[int]) -> bool:
    vertices = sorted(vertices)
    return all((i, j) in graph.edges for i, j in itertools.combinations(vertices, 2))


def verify_hyperclique(graph: Hypergraph4, vertices: Iterable[int]) -> bool:
    vertices = sorted(vertices)
    if len(vertices) == 0:
        return True
    return len(vertices) >= 4 and graph.is_hyperclique(vertices)
