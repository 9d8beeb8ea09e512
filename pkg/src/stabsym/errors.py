"""Shared exception types."""


class StabsymError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(StabsymError):
    """An enumeration or search would exceed the configured size/time cap."""


class SingularMatrix(StabsymError):
    """Matrix inversion requested for a rank-deficient matrix."""


class ConductorTooSmall(StabsymError):
    """The cyclotomic field does not contain the requested element."""


class OddOnly(StabsymError):
    """Operation is defined only for odd prime d."""


class InconsistentSigns(StabsymError):
    """Qubit sign data does not describe a valid stabilizer group."""


class WordDecompositionFailure(StabsymError):
    """A symplectic matrix could not be written in the standard generators."""


class Mismatch(StabsymError):
    """A verification found a counterexample; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBasisPreserving(StabsymError):
    """A permutation breaks the n=1 basis partition (signals a Gram bug)."""


class SearchTimeout(StabsymError):
    """Automorphism search hit its time budget; carries the partial group."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
