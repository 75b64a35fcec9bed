"""Exception taxonomy for the coalg engine.

Every error raised by the library is a subclass of CoalgError, so callers can
catch one base class at API boundaries (the CLI maps them to exit codes).
"""


class CoalgError(Exception):
    """Base class for all coalg errors."""


class DegenerateDenominator(CoalgError):
    """Division by a coefficient function whose numerator is the zero polynomial."""


class UnsupportedDerivative(CoalgError):
    """Differentiation with respect to a symbol that is not a differentiation direction."""


class PoleEvaluation(CoalgError):
    """Numeric or exact evaluation hit a zero of a denominator."""


class RadicalMismatch(CoalgError):
    """A binding for the radical symbol is inconsistent with its defining relation."""


class ContextMismatch(CoalgError):
    """Operands were built over different model contexts."""


class ModeMismatch(CoalgError):
    """An operation was requested in a context mode that does not support it."""


class DegenerateWeight(CoalgError):
    """A formal adjoint was requested with an identically zero weight."""


class UnsupportedTestFunction(CoalgError):
    """apply() received a function outside the closed test-function space."""


class UnsupportedRepresentation(CoalgError):
    """A gamma-matrix representation was requested for more than four generators."""


class IndexRange(CoalgError):
    """A stage or component index is out of its documented range."""


class MissingHamiltonian(CoalgError):
    """A ladder construction needed a Hamiltonian that was not supplied."""


class UnknownSuite(CoalgError):
    """run_suite() was asked for a suite name that does not exist."""


class SingularEncounter(CoalgError):
    """Orbit integration ran into a phase-space singularity.

    Carries the partial trajectory computed so far in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InsufficientSpan(CoalgError):
    """A trajectory does not span enough revolutions for the requested closure test."""


class ReductionInconsistent(CoalgError):
    """Two construction paths for a reduced operator disagree."""


class GaugeFailure(CoalgError):
    """A gauge choice left angular frequencies in a reduced operator.

    ``frequencies`` lists the offending (entry, frequency) pairs.
    """

    def __init__(self, message, frequencies=()):
        super().__init__(message)
        self.frequencies = tuple(frequencies)


class ExprSyntaxError(CoalgError):
    """Expression parsing failed; carries position and expectation info."""

    def __init__(self, message, line=1, column=0, expected=()):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = tuple(expected)
