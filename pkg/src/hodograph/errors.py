"""Exception hierarchy.

Every error raised by the library derives from :class:`HodographError`, and
also from the builtin it most closely resembles so callers can catch either.
"""


class HodographError(Exception):
    pass


# geometry

class DegenerateLine(HodographError, ValueError):
    pass


class CoincidentPoints(HodographError, ValueError):
    pass


class InsufficientPoints(HodographError, ValueError):
    pass


class CollinearPoints(HodographError, ValueError):
    pass


class ParallelLines(HodographError, ValueError):
    pass


# conics

class NoDirectorCircle(HodographError, ValueError):
    pass


class NoGardenerForm(HodographError, ValueError):
    pass


# dynamics

class CollisionState(HodographError, ValueError):
    pass


class DegenerateOrbit(HodographError, ValueError):
    pass


class OutOfBranch(HodographError, ValueError):
    pass


class ParabolicEnergy(HodographError, ValueError):
    pass


class CollisionApproach(HodographError, RuntimeError):
    pass


class NonPositiveStep(HodographError, ValueError):
    pass


class NonAdjacentBisectorsParallel(ParallelLines):
    """Two consecutive bisectors in an envelope grid do not cross."""


# scenarios / figures

class ScenarioFormatError(HodographError, ValueError):
    pass


class ScenarioClassMismatch(HodographError, ValueError):
    pass
