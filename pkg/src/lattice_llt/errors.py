"""Exception hierarchy. The class name doubles as the machine-readable error code."""


class LatticeError(Exception):
    """Base class for validation and domain errors (CLI exit code 2)."""

    @property
    def code(self) -> str:
        return type(self).__name__


class SumNotOne(LatticeError):
    pass


class DegenerateLaw(LatticeError):
    pass


class NonMaximalSpan(LatticeError):
    pass


class SupportTooLarge(LatticeError):
    pass


class BadOrder(LatticeError):
    pass


class NoBernoulliPart(LatticeError):
    pass


class InadmissibleTau(LatticeError):
    pass


class DomainError(LatticeError):
    pass


class EmptyGrid(LatticeError):
    pass
