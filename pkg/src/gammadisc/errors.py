"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`GammaDiscError`
so callers (the CLI in particular) can catch the whole family at once.
"""


class GammaDiscError(Exception):
    pass


# matrixkit
class NotHermitian(GammaDiscError):
    pass


class NegativeEigenvalue(GammaDiscError):
    pass


class DimensionMismatch(GammaDiscError, ValueError):
    pass


class EmptyCoefficients(GammaDiscError, ValueError):
    pass


# gamma
class NotCommuting(GammaDiscError):
    pass


class NotNormal(GammaDiscError):
    pass


class NotContractive(GammaDiscError):
    pass


class UnsupportedKind(GammaDiscError, ValueError):
    pass


class JointDiagonalizationFailure(GammaDiscError):
    pass


# asymptotics
class NoConvergence(GammaDiscError):
    pass


class IndexOutOfRange(GammaDiscError, IndexError):
    pass


class DefectFailure(GammaDiscError):
    pass


# dilation
class PureTuple(GammaDiscError):
    """Raised when the asymptotic limit vanishes, so no unitary extension exists."""


class IllConditioned(GammaDiscError):
    pass


class NotIsomorphic(GammaDiscError):
    pass


class NotAModuleMap(GammaDiscError):
    pass


class NotUnitaryModule(GammaDiscError):
    pass


# toeplitz / lifting
class GapTooSmall(GammaDiscError):
    pass


class NotInCommutant(GammaDiscError):
    pass


class NotToeplitz(GammaDiscError):
    pass


class Inconsistent(GammaDiscError):
    """A linear system that should be consistent has no solution within tolerance.

    Usually a symptom of a wrong rank decision upstream (for the asymptotic
    limit or for a null space).
    """


class NotIntertwining(GammaDiscError):
    pass


# io
class ParseError(GammaDiscError, ValueError):
    pass
