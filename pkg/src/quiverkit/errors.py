"""Exception types shared across the package."""


class QuiverKitError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(QuiverKitError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)


class NotComposableError(QuiverKitError):
    """Raised when two paths cannot be concatenated."""


class InvalidPresentationError(QuiverKitError):
    """A quiver, path or relation violates a structural invariant."""


class EmptyAlgebraError(QuiverKitError):
    """Deleting every vertex leaves no algebra."""


class InfiniteDimensionalError(QuiverKitError):
    """An operation required a finite-dimensional algebra."""


class PathExplosionError(QuiverKitError):
    """Path enumeration exceeded the safety cap before the basis stabilised."""


class InvalidModuleError(QuiverKitError):
    """A representation has mismatched shapes or an invalid construction input."""


class DecomposableError(QuiverKitError):
    """The translate of a decomposable module was requested."""


class DirectednessViolatedError(QuiverKitError):
    """The translation closure is only valid for representation-directed algebras."""


class IncompleteListError(QuiverKitError):
    """An AR-quiver construction received an incomplete module list."""


class MultiplicityUnsupportedError(QuiverKitError):
    """An irreducible-map multiplicity of two or more has no canonical relations."""


class AuslanderPresentationError(QuiverKitError):
    """The endomorphism algebra did not admit a length-graded presentation."""


class NotPDSError(QuiverKitError):
    """No grid coordinate assignment exists for the quiver."""


class IndeterminateError(QuiverKitError):
    """Both the string and the band search truncated; no verdict possible."""
