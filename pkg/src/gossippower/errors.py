"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` used by the command line front end.
"""


class GossipPowerError(Exception):
    exit_code = 1


class ParameterError(GossipPowerError, ValueError):
    """Invalid argument, dimension mismatch or inconsistent configuration."""

    exit_code = 2


class NumericError(GossipPowerError, ArithmeticError):
    """A computation produced a non-finite or degenerate value."""

    exit_code = 3


class GenerationError(GossipPowerError, RuntimeError):
    """Random construction failed within its retry budget."""

    exit_code = 4
