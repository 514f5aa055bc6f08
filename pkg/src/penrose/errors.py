"""Exception hierarchy.

Two families matter to the command line: ``InputError`` (malformed or
ill-posed input, exit code 2) and ``MathViolation`` (a geometric or algebraic
condition failed, exit code 1).
"""
from __future__ import annotations


class PenroseError(Exception):
    """Base class for every error raised by the package."""


class InputError(PenroseError):
    pass


class MathViolation(PenroseError):
    pass


# core algebra
class ModeMismatch(InputError):
    """Exact and float values were combined."""


class DegreeMismatch(InputError):
    pass


class VariableCountMismatch(InputError):
    pass


class DegreeOverflow(InputError):
    pass


class NotRankOne(MathViolation):
    pass


class SizeMismatch(InputError):
    pass


# projective
class CoincidentLines(MathViolation):
    pass


class CoincidentArguments(MathViolation):
    pass


class EmptyInput(InputError):
    pass


class DegenerateSetMember(MathViolation):
    pass


class ProjectivelyEqual(MathViolation):
    pass


class NoContact(MathViolation):
    pass


class IrrationalContact(MathViolation):
    pass


class NeedsDualPartner(InputError):
    pass


# engine
class IndexInSet(InputError):
    pass


class ZeroChord(MathViolation):
    pass


class IdentityViolation(MathViolation):
    pass


# completion
class InconsistentFace(MathViolation):
    pass


class DegenerateBasis(MathViolation):
    pass


class NoSecondCompletion(MathViolation):
    pass


class PrereqNotMet(MathViolation):
    pass


class AxesIdentical(MathViolation):
    pass


class IncidentPolarPair(MathViolation):
    pass


# lift3d
class ScalingInconsistent(MathViolation):
    pass


class TangentPlane(MathViolation):
    pass


# scenarios
class IrrationalData(InputError):
    pass


class InteriorPoint(InputError):
    pass


class DegeneratePosition(InputError):
    pass


class ConcentricCircles(InputError):
    pass
