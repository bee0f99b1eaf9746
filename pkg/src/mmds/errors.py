"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` (a ``ValueError``),
numerical failures from :class:`SolverError`.  The CLI maps the two onto
distinct exit codes.
"""


class ValidationError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


class NonSquare(ValidationError):
    def __init__(self, shape):
        super().__init__(f"matrix is not square: shape {tuple(shape)}")
        self.shape = tuple(shape)


class AsymmetricEntry(ValidationError):
    def __init__(self, r, s, a, b):
        super().__init__(f"entries ({r},{s})={a!r} and ({s},{r})={b!r} differ")
        self.r, self.s = r, s


class NegativeEntry(ValidationError):
    def __init__(self, r, s, value):
        super().__init__(f"entry ({r},{s}) is negative: {value!r}")
        self.r, self.s = r, s


class NonzeroDiagonal(ValidationError):
    def __init__(self, r, value):
        super().__init__(f"diagonal entry ({r},{r}) is nonzero: {value!r}")
        self.r = r


class NotSymmetric(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class InvalidMeasure(ValidationError):
    pass


class ZeroWeightRequested(ValidationError):
    pass


class ModeOutOfRange(ValidationError):
    pass


class ZeroMode(ValidationError):
    pass


class BadCutoff(ValidationError):
    pass


class NoConvergence(SolverError):
    pass
