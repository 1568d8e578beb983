"""Exception hierarchy shared by all modules."""


class SoergelError(Exception):
    """Base class for every error raised by the package."""


# ring
class TechnicalConditionFailed(SoergelError):
    pass


class BraidRelationFailed(SoergelError):
    pass


class UnbalancedRealization(SoergelError):
    pass


class UnsupportedCoxeterEntry(SoergelError):
    pass


class UnsupportedFieldExtension(SoergelError):
    pass


class InternalDivisionFailure(SoergelError):
    """An exact division that must succeed did not; indicates a bug."""


# coxeter
class RadiusExceeded(SoergelError):
    pass


class MismatchedExpressions(SoergelError):
    pass


class NotReducedExpression(SoergelError):
    pass


# diagram
class BoundaryMismatch(SoergelError):
    pass


class InvalidSubexpression(SoergelError):
    pass


class EndpointMismatch(SoergelError):
    pass


# bimod
class NonUniqueSolution(SoergelError):
    pass


class NoSolution(SoergelError):
    pass


# localize
class VertexUnavailable(SoergelError):
    pass


class RelationFailed(SoergelError):
    def __init__(self, name, witness=None):
        super().__init__(f"relation {name} failed" + (f": {witness}" if witness else ""))
        self.name = name
        self.witness = witness


class TriangularityViolated(SoergelError):
    pass


class RankDeficient(SoergelError):
    pass


class GradedRankMismatch(SoergelError):
    pass


# jw
class QuantumNumberVanishes(SoergelError):
    def __init__(self, k):
        super().__init__(f"quantum number [{k}] vanishes")
        self.k = k


class ColorParityMismatch(SoergelError):
    pass


# cli
class BadDiagramFile(SoergelError):
    pass
