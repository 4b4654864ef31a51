"""Exception types raised across the package."""


class StrichartzError(Exception):
    """Base class for all package errors."""


class ParseError(StrichartzError, ValueError):
    """An exponent, rational or list argument could not be parsed."""


class UnderResolvedError(StrichartzError, ValueError):
    """A grid does not resolve the finest feature of a forcing term."""


class GridMismatchError(StrichartzError, ValueError):
    """Frames or fields live on incompatible grids."""


class HorizonError(StrichartzError, ValueError):
    """A requested time lies beyond the periodic-box validity horizon."""


class ScaleRangeError(StrichartzError, ValueError):
    """A dyadic scale range is empty or too coarse for the requested data."""


class DegenerateFitError(StrichartzError, ValueError):
    """Fewer than three usable points remain for a log-log fit."""
