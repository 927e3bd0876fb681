"""Exception hierarchy shared by every module of the package."""


class Fano4Error(Exception):
    """Base class for all errors raised by fano4."""


class DomainError(Fano4Error, ValueError):
    """An argument lies outside the domain of an operation."""


class StructuralError(Fano4Error, ValueError):
    """Malformed fan data (non-primitive ray, bad index, wrong cone size...)."""

    def __init__(self, defects):
        if isinstance(defects, str):
            defects = [defects]
        self.defects = list(defects)
        super().__init__("; ".join(self.defects))


class UnsupportedFanError(Fano4Error, ValueError):
    """The intersection engine needs a smooth complete fan."""


class InconsistencyError(Fano4Error, ArithmeticError):
    """A quantity that must be integral (or must satisfy an identity) does not."""


class NotConstructibleError(Fano4Error):
    """A recipe carries expectations only and cannot be evaluated."""
