class RVFLError(Exception):
    """Base class for everything rvfl raises on purpose."""


class InvalidArgumentError(RVFLError, ValueError):
    pass


class NumericalError(RVFLError, ArithmeticError):
    """
    A factorization or update produced something that isn't usable.

    Parameters
    ----------
    message: str
        what went wrong
    rows: int, None
        number of design rows involved in a failed batch solve
    step: int, None
        0-based online index at which an incremental update failed
    """

    def __init__(self, message, rows=None, step=None):
        super(NumericalError, self).__init__(message)
        self.rows = rows
        self.step = step

    def with_context(self, step=None, method=None, seed=None):
        """Return a copy of the error that also names where it happened."""
        parts = [str(self.args[0])]
        if method is not None:
            parts.append("method={0}".format(method))
        if seed is not None:
            parts.append("seed={0}".format(seed))
        if step is not None:
            parts.append("step={0}".format(step))
        err = self.__class__(" | ".join(parts), rows=self.rows, step=step)
        err.method = method
        err.seed = seed
        return err


class WeightOverflowError(NumericalError, OverflowError):
    """
    The squared sample weight of the next step is not representable as a
    double. Switch the state to rescaled mode.
    """


class DataIOError(RVFLError, IOError):
    pass


class ParseError(RVFLError, ValueError):

    def __init__(self, message, row=None):
        super(ParseError, self).__init__(message)
        self.row = row


class ConfigError(RVFLError, ValueError):

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super(ConfigError, self).__init__("Invalid configuration:\n  " + "\n  ".join(self.diagnostics))
