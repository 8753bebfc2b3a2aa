# src/errors.py


class OfjdarError(Exception):
    """Root of every error raised by the library."""


class ConfigurationError(OfjdarError, ValueError):
    """Invalid parameters, grids, counts or schedules."""


class DegenerateInputError(OfjdarError, ValueError):
    """Input that makes a computation undefined (zero mean, constant labels)."""


class DegenerateClassError(DegenerateInputError):
    """A fuzzy class without any support in a domain."""


class ContractViolationError(OfjdarError, ValueError):
    """An argument breaks a documented precondition."""


class ShapeMismatchError(OfjdarError, ValueError):
    """Arrays whose shapes do not conform."""


class DatasetParseError(OfjdarError, ValueError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class SolverError(OfjdarError, RuntimeError):
    """Numerical solver failure after regularization attempts."""


class GprFitError(SolverError):
    pass


class HyperparameterSelectionError(SolverError):
    pass
