class SonarCliqueError(Exception):
    """Base class for all errors raised by sonarclique."""


class DegeneratePointError(SonarCliqueError):
    """A point has zero range and cannot be projected."""

    def __init__(self, message: str = "degenerate point"):
        super().__init__(message)


class BoundsError(SonarCliqueError):
    """The bounded-noise expansion of the feasible interval is not defined."""

    def __init__(self, message: str = "bearing separation too large for bounded-noise expansion"):
        super().__init__(message)


class CollinearTripleError(SonarCliqueError):
    def __init__(self, message: str = "collinear triple"):
        super().__init__(message)


class NonCoplanarError(SonarCliqueError):
    def __init__(self, message: str = "world points are not coplanar"):
        super().__init__(message)


class DegenerateVarianceError(SonarCliqueError):
    def __init__(self, message: str = "degenerate variance"):
        super().__init__(message)


class SolverLimitError(SonarCliqueError):
    """The exact hypergraph solver was asked to solve an instance above its size guard."""

    def __init__(self, message: str = "use heuristic"):
        super().__init__(message)


class SceneGenerationError(SonarCliqueError):
    def __init__(self, message: str = "box outside FoV"):
        super().__init__(message)


class ConfigError(SonarCliqueError):
    """Invalid configuration file or flags."""


class ResultsIOError(SonarCliqueError):
    """Reading or writing a result/correspondence file failed."""

    def __init__(self, path, cause: Exception):
        self.path = path
        super().__init__(f"{path}: {cause}")
