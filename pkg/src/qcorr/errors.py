"""Exception types shared across the package."""


class QcorrError(Exception):
    """Base class for all package errors."""


class DimensionError(QcorrError):
    """Matrix/party dimensions are inconsistent."""


class NumericalError(QcorrError):
    """A numerical routine failed to converge."""


class DomainError(QcorrError):
    """A spectral function was applied outside its domain."""


class ParamError(QcorrError):
    """Invalid parameters for a state family."""


class FormatError(QcorrError):
    """A state file does not match the expected schema."""


class StateValidationError(QcorrError):
    """A matrix fails the density-operator invariants."""


class BasisError(QcorrError):
    """A supplied basis is not orthonormal."""


class PurityError(QcorrError):
    """A pure-state fast path was called on a mixed state."""


class CatalogMiss(QcorrError):
    """No closed-form value is cataloged for this family/partition."""
