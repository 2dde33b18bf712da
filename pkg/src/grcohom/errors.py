"""Engine exceptions.  ``exit_code`` is what the command line reports."""


class EngineError(Exception):
    exit_code = 3


class NotSharp(EngineError):
    pass


class ZeroDimension(EngineError):
    pass


class DimensionMismatch(EngineError):
    pass


class Unbounded(EngineError):
    pass


class IndexOutOfRange(EngineError):
    pass


class BoxTooSmall(EngineError):
    pass


class NotQGraded(EngineError):
    pass


class NotInColon(EngineError):
    pass


class VerificationFailed(EngineError):
    pass


class ShapeMismatch(EngineError):
    pass


class NotComplex(EngineError):
    pass


class NotLatticePoint(EngineError):
    pass


class NotSaturated(EngineError):
    exit_code = 4


class NotStabilized(EngineError):
    exit_code = 5


class PlotDimension(EngineError):
    exit_code = 6


class SchemaError(Exception):
    exit_code = 2
