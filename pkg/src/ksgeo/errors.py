"""Exception hierarchy.

The three intermediate classes carry the CLI exit-code categories:
GeometryError -> 3, PreconditionError -> 4, FormatError -> 5.
"""


class KSError(Exception):
    """Base class for all package errors."""


class GeometryError(KSError):
    pass


class PreconditionError(KSError):
    pass


class FormatError(KSError):
    pass


# geom
class NonUnitVector(GeometryError):
    pass


class DegeneratePoint(GeometryError):
    pass


class EquatorOrSouthern(GeometryError):
    pass


class BetaOutOfRange(PreconditionError):
    pass


# descent
class NotMoreSoutherly(PreconditionError):
    pass


class DegenerateEndpoint(PreconditionError):
    pass


# construct
class BadStep(PreconditionError):
    pass


class BadAngle(PreconditionError):
    pass


# csp
class TooLarge(PreconditionError):
    pass


class NotDerivable(KSError):
    """The circuit-shaped proof search did not close."""


# formats
class ParseError(FormatError):
    def __init__(self, msg, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)
        self.line = line
        self.field = field


class DuplicateId(FormatError):
    pass


class ZeroVector(FormatError):
    pass


class TooManyPoints(PreconditionError):
    pass
