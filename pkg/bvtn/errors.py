"""Exceptions raised by the bvtn package."""


class BvtnError(Exception):
    """Base class for every error the library raises on purpose."""


class NodeError(BvtnError, ValueError):
    """The node list does not describe a valid Bernstein-Vandermonde matrix."""


class EmptyNodes(NodeError):
    pass


class OutOfRange(NodeError):
    pass


class NonMonotonic(NodeError):
    pass


class DegreeExceedsRows(BvtnError, ValueError):
    pass


class DimensionMismatch(BvtnError, ValueError):
    pass


class NotSquare(BvtnError, ValueError):
    pass


class LengthMismatch(BvtnError, ValueError):
    pass


class UnderflowDetected(BvtnError, ArithmeticError):
    pass


class ZeroPivot(BvtnError, ArithmeticError):
    pass


class NoConvergence(BvtnError, RuntimeError):
    pass


class PrecisionExhausted(BvtnError, RuntimeError):
    """
    The precision ceiling was hit before two successive trials agreed.

    The best available result (from the highest precision tried) is kept
    in ``partial`` so callers can still inspect it.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
