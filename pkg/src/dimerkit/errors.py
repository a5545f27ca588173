"""Exception hierarchy shared by all dimerkit modules."""


class DimerError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class GraphError(DimerError, ValueError):
    pass


class CapExceeded(DimerError):
    pass


class MapError(DimerError, ValueError):
    pass


class Disconnected(MapError):
    pass


class DegenerateBasis(MapError):
    pass


class DegeneratePairing(MapError):
    pass


class OddDegree(MapError):
    pass


class OddVertexCount(DimerError):
    pass


class SingularGram(DimerError):
    pass


class NotBipartite(DimerError):
    pass


class UnequalColorClasses(DimerError):
    pass


class NotGenusOne(DimerError):
    pass


class ZeroPolynomial(DimerError):
    pass


class DegenerateSlice(DimerError):
    pass


class NoConvergence(DimerError):
    pass


class OddM(DimerError, ValueError):
    pass


class ParseError(DimerError):
    pass
