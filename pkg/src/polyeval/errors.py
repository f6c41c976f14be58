"""Exception types raised by the certified arithmetic routines."""


class PolyEvalError(Exception):
    """Base class for all library errors."""


class InsufficientInputPrecision(PolyEvalError):
    """An operand does not carry the error exponent an operation demands.

    The caller has to re-query its source at (at least) ``required`` bits.
    """

    def __init__(self, message, required=None, available=None):
        super().__init__(message)
        self.required = required
        self.available = available


class PrecisionExhausted(PolyEvalError):
    """Certification still fails after the capped number of precision doublings."""


class DegenerateDivisor(PolyEvalError):
    """Leading coefficient of a normalized divisor is below 2^(-4*n*rho)."""


class NotMonic(PolyEvalError):
    """Divisor passed to a monic division has a leading coefficient other than exactly 1."""


class CoincidentPoints(PolyEvalError):
    """Interpolation nodes are (numerically) not distinct."""


class ZeroDivisor(PolyEvalError):
    """Exact division by the zero polynomial."""


class EvaluationUndecidable(PolyEvalError):
    """A certified sign could not be decided at any candidate point.

    ``index`` identifies the offending isolating interval in the batch.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ParseError(PolyEvalError, ValueError):
    """Malformed input file; ``lineno`` is 1-based (``None`` for whole-file problems)."""

    def __init__(self, message, lineno=None, path=None):
        where = f"{path or '<input>'}:{lineno}: " if lineno is not None else \
            (f"{path}: " if path else "")
        super().__init__(where + message)
        self.lineno = lineno
        self.path = path
