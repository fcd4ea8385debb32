"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`StoqdynError`, and the
ones that signal bad caller input additionally derive from ``ValueError`` so
ordinary ``except ValueError`` handlers keep working.
"""


class StoqdynError(Exception):
    """Base class for all toolkit errors."""


class InputError(StoqdynError, ValueError):
    """Base class for errors caused by invalid input."""


# simplex-core
class NotNormalized(InputError):
    pass


class OutOfRange(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class LambdaOutOfRange(InputError):
    pass


class NotStochastic(InputError):
    pass


# trajectory-measure
class InvalidEvent(InputError):
    pass


class InvalidTime(InputError):
    pass


class InvalidMeasure(InputError):
    pass


class LengthMismatch(InputError):
    pass


class NotMarkovian(StoqdynError):
    pass


class CapExceeded(InputError):
    pass


# dynamics
class NotDecomposable(StoqdynError):
    pass


class GridNotDifferenceClosed(InputError):
    pass


class InvalidDynamics(InputError):
    pass


# implementation
class GridMismatch(InputError):
    pass


class InvalidFamily(InputError):
    pass


class DegenerateTrajectory(StoqdynError):
    pass


class UnknownMember(InputError):
    pass


class UnknownSupportVector(InputError):
    pass


class BadWeights(InputError):
    pass


# statistical-dynamics
class BadConfig(InputError):
    pass


class GridTooLarge(CapExceeded):
    pass


# quantum-bridge
class PreconditionFailed(InputError):
    pass


class NotDensityMatrix(InputError):
    pass


class WrongDimension(InputError):
    pass


class NotUnitary(InputError):
    pass


class SingularIntermediate(StoqdynError):
    pass


# cli / io
class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class UnknownSchema(InputError):
    pass


class UnknownFixture(InputError):
    pass
