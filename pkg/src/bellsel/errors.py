"""Exception types raised across the package."""


class BellSelError(Exception):
    """Base class for all package errors."""


class InvalidStateError(BellSelError, ValueError):
    pass


class InvalidPolicyError(BellSelError, ValueError):
    pass


class EmptyDatasetError(BellSelError, ValueError):
    pass


class DegeneratePosteriorError(BellSelError, ValueError):
    pass


class EmptySelectionError(BellSelError, ValueError):
    pass


class CycleError(BellSelError, ValueError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("edge set contains the cycle " + " -> ".join(map(str, self.cycle)))


class UnknownVariableError(BellSelError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown variable"


class ArgumentError(BellSelError, ValueError):
    pass


class StateSpaceError(BellSelError, ValueError):
    pass


class ConditioningError(BellSelError, ValueError):
    """Conditioning on an event of probability zero."""


class InfeasibleCounterfactualError(ConditioningError):
    """Intervention leaves no mass once the constraint is re-imposed."""


class ConstraintTargetError(BellSelError, ValueError):
    pass


class ParameterError(BellSelError, ValueError):
    pass


class PreconditionError(BellSelError, ValueError):
    pass


class DatasetFormatError(BellSelError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
