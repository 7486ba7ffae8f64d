class ConfigError(ValueError):
    """
    Raised when a run configuration violates a named constraint.
    """


class QuadratureError(ArithmeticError):
    """
    Raised when an adaptive quadrature does not reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Error estimate reported by the quadrature routine.
    """
    def __init__(self, message: str, achieved: float):
        super().__init__(f"Quadrature Error: {message} (achieved tolerance {achieved:.3e})")
        self.achieved = achieved


class CFLViolation(ArithmeticError):
    """
    Raised when the characteristic integrator cannot satisfy the substep bound.
    """


class NumericalAbort(RuntimeError):
    """
    Raised when a solver guard trips; the last state has been written to ``dump_path``.

    Attributes
    ----------
    dump_path : str | None
        Location of the state dump, if one could be written.
    """
    def __init__(self, message: str, dump_path: str | None = None):
        suffix = f" (state dumped to {dump_path})" if dump_path else ""
        super().__init__(f"Numerical Abort: {message}{suffix}")
        self.dump_path = dump_path


class PreconditionError(ValueError):
    """
    Raised when a trial draw cannot satisfy the gate an inequality is stated under.

    Attributes
    ----------
    gate : str
        Name of the violated gate.
    """
    def __init__(self, gate: str, message: str = ''):
        super().__init__(f"Precondition Error: gate '{gate}' violated{': ' + message if message else ''}")
        self.gate = gate
