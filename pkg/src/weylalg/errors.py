"""Exception hierarchy shared across the package."""


class WeylalgError(Exception):
    pass


class BasisMismatchError(WeylalgError):
    """Operands are defined over different generator bases."""


class BackendMismatchError(WeylalgError):
    """Operands use different scalar backends."""


class ParityBlockError(WeylalgError):
    """A bilinear form (or linear map) violates the parity-block constraint."""


class DomainError(WeylalgError):
    """An argument is outside the operation's domain."""


class RefusedPreconditionError(WeylalgError):
    """The requested parameters fall outside the range the theory covers."""


class WindowOverflowError(WeylalgError):
    """A lattice computation would leave the finite spacetime window."""


class TruncationBudgetError(WeylalgError):
    """A truncated-series operation cannot certify exactness at this budget."""
