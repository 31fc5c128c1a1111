class TropicalError(Exception):
    """Base class for every error raised by the toolkit"""


class InvalidInputError(TropicalError, ValueError):
    """Input violates a documented invariant; the CLI maps it to exit code 2"""

    invariant = "input"

    def __init__(self, message: str, invariant: str = None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class LatticeError(InvalidInputError):
    invariant = "lattice"


class PolyhedronError(InvalidInputError):
    invariant = "polyhedron"


class ComplexError(InvalidInputError):
    invariant = "complex"


class PolynomialError(InvalidInputError):
    invariant = "tropical polynomial"


class IntersectionError(InvalidInputError):
    invariant = "transversality"


class CurrentsError(InvalidInputError):
    invariant = "current frame"


class AmoebaError(InvalidInputError):
    invariant = "amoeba sample"


class ToricError(InvalidInputError):
    invariant = "saturated basis"


class DocumentError(InvalidInputError):
    invariant = "document"
