"""Exception hierarchy shared by all growthlab modules."""


class GrowthLabError(Exception):
    """Base class for every error raised by growthlab."""


class NonConvergentSeries(GrowthLabError):
    pass


class PoleHit(GrowthLabError):
    pass


class ZerosUnknown(GrowthLabError):
    pass


class SingularityUnresolved(GrowthLabError):
    pass


class ProfileCoverage(GrowthLabError):
    pass


class TailUndeclared(GrowthLabError):
    pass


class Divergent(GrowthLabError):
    pass


class QuadratureStall(GrowthLabError):
    pass


class OriginPoint(GrowthLabError):
    pass


class GenusTooSmall(GrowthLabError):
    pass


class NegativeInfinity(GrowthLabError):
    """N_Z(r) < 0 requested in a context that needs a nonnegative count."""


class ParseError(GrowthLabError):
    pass
