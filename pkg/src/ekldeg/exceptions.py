"""Custom exceptions for ekldeg.

The hierarchy has three families, and the CLI maps each one to an exit code:

- ``InputError``: malformed input (exit 1)
- ``MathPreconditionError``: a mathematical precondition does not hold (exit 2)
- ``InternalError``: an identity that must hold has failed (exit 3)
"""


class EKLDegError(Exception):
    """Base exception for ekldeg."""

    exit_code = 3


class InputError(EKLDegError):
    """Raised when user input cannot be read."""

    exit_code = 1


class ParseError(InputError):
    """Raised when a polynomial, point, field spec or job file does not parse."""

    pass


class InvalidFieldSpecError(ParseError):
    """Raised when a field spec string is not one of QQ, RR, Fp:<p>, Qp:<p>."""

    pass


class ContextMismatchError(InputError):
    """Raised when operands live over different fields or variable lists."""

    pass


class MathPreconditionError(EKLDegError):
    """Raised when the input violates a mathematical precondition."""

    exit_code = 2


class ZeroElementError(MathPreconditionError):
    """Raised when a nonzero field element is required."""

    pass


class NotIsolatedZeroError(MathPreconditionError):
    """Raised when the origin is not an isolated zero of the system."""

    pass


class ZeroIdealInputError(MathPreconditionError):
    """Raised when every component of the system vanishes identically."""

    pass


class NonRationalPointError(MathPreconditionError):
    """Raised when a point that must be rational is not."""

    pass


class NonRationalImageError(MathPreconditionError):
    """Raised when f(x) does not have coordinates in the base field."""

    pass


class NotEtaleError(MathPreconditionError):
    """Raised when the Jacobian determinant vanishes at the point."""

    pass


class DegenerateCriticalPointError(MathPreconditionError):
    """Raised when the Hessian determinant vanishes at a critical point."""

    pass


class UnresolvedFiberError(MathPreconditionError):
    """Raised when a fiber contains a point this library cannot resolve."""

    pass


class Char2UnsupportedError(MathPreconditionError):
    """Raised for operations that need characteristic different from 2."""

    pass


class RankParityMismatchError(MathPreconditionError):
    """Raised when two forms differ in rank by an odd number."""

    pass


class ReducibleModulusError(MathPreconditionError):
    """Raised when an extension modulus is not monic irreducible."""

    pass


class InternalError(EKLDegError):
    """Raised when an internal identity fails; indicates a bug."""

    exit_code = 3


class InternalContradictionError(InternalError):
    """Raised when a mathematically impossible state is reached."""

    pass


class DegenerateFormError(InternalError):
    """Raised when a bilinear form expected to be nondegenerate is not."""

    pass


class StepLimitExceededError(InternalError):
    """Raised when a reduction exceeds the configured step limit."""

    pass


class CapExceededError(InternalError):
    """Raised when a bounded search runs past its safety cap."""

    pass
