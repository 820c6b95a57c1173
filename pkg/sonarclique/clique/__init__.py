from .base import CliqueResult, CliqueSolver, verify_clique, verify_hyperclique
from .factory import SolverFactory
from .hyper import HyperExactSolver, HyperPeelingSolver, max_clique_hyper4_exact, max_clique_hyper4_heuristic
from .simple import SimpleBranchAndBound, max_clique_simple

__all__ = [
    "CliqueResult",
    "CliqueSolver",
    "HyperExactSolver",
    "HyperPeelingSolver",
    "SimpleBranchAndBound",
    "SolverFactory",
    "max_clique_hyper4_exact",
    "max_clique_hyper4_heuristic",
    "max_clique_simple",
    "verify_clique",
    "verify_hyperclique",
]
