"""Exception hierarchy.

The CLI maps these onto exit codes: ``DataError`` -> 2,
``ComputationError`` -> 3, ``ConfigError`` -> 1.
"""


class CommSpreadError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CommSpreadError, ValueError):
    """Invalid parameters or configuration."""


class DataError(CommSpreadError, ValueError):
    """Input data failed to parse or validate."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ComputationError(CommSpreadError, ArithmeticError):
    """A quantity is mathematically undefined for the given input."""


class MeasureUndefined(ComputationError):
    def __init__(self, measure, message, community=None):
        self.measure = measure
        self.community = community
        super().__init__(f"{measure}: {message}")


class StatisticUndefined(ComputationError):
    pass


class ThresholdUndefined(ComputationError):
    pass


class SimulationError(ComputationError):
    pass
