class CoopNCError(Exception):
    pass


class ConfigurationError(CoopNCError, ValueError):
    """Bad user-supplied configuration (scheme name, field size, sweep grid...)."""


class InstanceShapeError(CoopNCError, ValueError):
    """A vector or scenario does not have the shape the operation expects."""


class InvalidPlanError(CoopNCError, ValueError):
    pass


class RunawayError(CoopNCError, RuntimeError):
    """A run exceeded its slot cap. Always a scheduler bug, never a normal outcome."""


class InvariantViolation(CoopNCError, AssertionError):
    pass


class SizeError(CoopNCError, ValueError):
    pass
