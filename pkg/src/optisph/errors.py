"""Exception types shared across the package."""


class OptisphError(Exception):
    """Base class for all package-specific failures."""


class BandLimitError(OptisphError, ValueError):
    """Band limit is non-positive or inconsistent between two inputs."""


class OrderRangeError(OptisphError, ValueError):
    """Requested degree, order or spin lies outside the valid range."""


class AliasingError(OptisphError, ValueError):
    """Ring analysis requested at a frequency the ring cannot resolve."""


class RootFindError(OptisphError, RuntimeError):
    """Partitioning a sampling measure failed to converge."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class IllConditionedSolveError(OptisphError, RuntimeError):
    """A per-order system was numerically singular at solve time."""

    def __init__(self, order: int, kappa: float):
        super().__init__(
            f"order {order} system is numerically singular (condition number {kappa:.3e})"
        )
        self.order = order
        self.kappa = kappa


class IllConditionedGridError(OptisphError, RuntimeError):
    """Every remaining candidate produced a singular block during ordering."""

    def __init__(self, order: int):
        super().__init__(f"no candidate gives a finite condition number at order {order}")
        self.order = order


class SingularSystemError(OptisphError, RuntimeError):
    """The dense least-squares system is rank deficient."""


class FileFormatError(OptisphError, ValueError):
    """A grid, coefficient, signal or report file failed to parse."""
