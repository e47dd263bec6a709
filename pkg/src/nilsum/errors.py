"""Exception hierarchy shared by every nilsum module."""


class NilsumError(Exception):
    pass


class RingMismatchError(NilsumError, TypeError):
    """Operands live in different rings (or one is not a ring element at all)."""


class ShapeError(NilsumError, ValueError):
    pass


class SingularMatrixError(NilsumError, ValueError):
    pass


class ScalarMatrixError(NilsumError, ValueError):
    """A construction needs a nonscalar matrix and got a scalar one."""


class WitnessMismatchError(NilsumError, ValueError):
    """A commutator witness does not certify the element it is used for."""


class InfeasibleError(NilsumError, ValueError):
    """The requested decomposition does not exist for this input (CLI exit 3)."""


class CertificateError(NilsumError, ValueError):
    """Structurally malformed certificate JSON."""
