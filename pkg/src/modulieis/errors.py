"""Exception hierarchy.

Every failure mode raised by the library is a subclass of ModuliEisError,
so callers (and the CLI) can map any library error to a failed run report.
"""


class ModuliEisError(Exception):
    pass


# field layer
class DivisionByZero(ModuliEisError, ZeroDivisionError):
    pass


class MixedFields(ModuliEisError):
    pass


class NoRootOfUnity(ModuliEisError):
    pass


class BadDescriptor(ModuliEisError):
    pass


# curve layer
class PointNotOnCurve(ModuliEisError):
    pass


class BadCharacteristic(ModuliEisError):
    pass


class TorsionNotRational(ModuliEisError):
    pass


class NoCurveFound(ModuliEisError):
    pass


class ZeroScalar(ModuliEisError):
    pass


# series layer
class CharacteristicTooSmall(ModuliEisError):
    pass


class DegenerateDivisor(ModuliEisError):
    pass


class IdentityPoint(ModuliEisError):
    pass


class UnsupportedDivisor(ModuliEisError):
    pass


# pairing layer
class PointNotTorsion(ModuliEisError):
    pass


class PreimageUnavailable(ModuliEisError):
    pass


# identities layer
class IdentityUnknown(ModuliEisError):
    pass


class PreconditionUnsatisfiable(ModuliEisError):
    pass


class InsufficientPoints(ModuliEisError):
    pass


# model builder
class FiberEnumerationFailure(ModuliEisError):
    pass


class RetryNeeded(ModuliEisError):
    pass


class DegenerateModel(ModuliEisError):
    pass


class ConventionMismatch(ModuliEisError):
    pass


# analytic layer
class PoleProximity(ModuliEisError):
    pass


class ZeroTorsionIndex(ModuliEisError):
    pass


class DegenerateTriple(ModuliEisError):
    pass


# cli layer
class UsageError(ModuliEisError):
    pass


class SchemaMismatch(ModuliEisError):
    pass
