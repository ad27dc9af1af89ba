"""Exception hierarchy shared by all modules."""


class ZetaBoundsError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ZetaBoundsError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1."""


class NonConvergenceError(ZetaBoundsError):
    """No admissible truncation reaches the requested radius."""


class IndexOutOfRangeError(ZetaBoundsError, IndexError):
    """A table index is beyond the stored range."""


class PrecisionUnreachableError(ZetaBoundsError):
    """Stored data is not accurate enough for the requested precision."""


class ZeroCrossingError(ZetaBoundsError):
    """An enclosure of |zeta| contains 0 where a reciprocal is needed."""


class BudgetError(ZetaBoundsError):
    """Adaptive refinement exceeded its node budget."""


class LadderOrderError(DomainError):
    """Ladder entries are not strictly increasing in W or have Q <= 0."""


class IncompatibleRegionError(ZetaBoundsError):
    """Two regimes cannot be combined because their regions do not nest."""


class InfeasibleBoxError(ZetaBoundsError):
    """No seed point of an optimization box satisfies the constraints."""


class FixtureError(ZetaBoundsError):
    """A fixture or config file is missing or malformed."""
