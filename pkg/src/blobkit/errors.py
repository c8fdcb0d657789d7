"""Exception types shared across the package."""


class BlobkitError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class InexactDivision(BlobkitError, ArithmeticError):
    pass


class ZeroDenominator(BlobkitError, ZeroDivisionError):
    pass


class PoleAtSpecialization(BlobkitError, ArithmeticError):
    pass


class WallThroughOrigin(BlobkitError, ValueError):
    pass


class TruncationTooSmall(BlobkitError, ValueError):
    pass


class NotOneRow(BlobkitError, ValueError):
    pass


class NotTouching(BlobkitError, ValueError):
    pass


class DegreeMismatch(BlobkitError, ValueError):
    pass


class InadmissibleSpecialization(BlobkitError, ValueError):
    pass


class NoUnitCoefficient(BlobkitError, ValueError):
    pass


class SizeLimit(BlobkitError, ValueError):
    pass


class NotCritical(BlobkitError, ValueError):
    pass


class RelationFailure(BlobkitError, AssertionError):
    pass


class ParameterConstraintViolated(BlobkitError, ValueError):
    pass
