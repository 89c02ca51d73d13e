"""Exception types raised across the package."""


class RsError(Exception):
    """Base class for all rsclust errors."""


# distance
class AsymmetricMatrix(RsError, ValueError):
    pass


class NegativeDistance(RsError, ValueError):
    pass


class NonzeroDiagonal(RsError, ValueError):
    pass


class NonFiniteDistance(RsError, ValueError):
    pass


class NotSquare(RsError, ValueError):
    pass


# sct / hierarchy
class IsolatedEntity(RsError):
    """An entity has no neighbor at finite distance."""

    def __init__(self, entity):
        super().__init__(f"entity {entity} has no neighbor at finite distance")
        self.entity = entity


class NotAMember(RsError, KeyError):
    pass


class BadAlpha(RsError, ValueError):
    pass


class IterationOutOfRange(RsError, IndexError):
    pass


class InfiniteBaseDistance(RsError, ValueError):
    pass


# metrics / baselines / graphs
class MismatchedEntities(RsError, ValueError):
    pass


class DisconnectedGraph(RsError, ValueError):
    pass


class InfiniteDistance(RsError, ValueError):
    pass


class BadK(RsError, ValueError):
    pass


# ingestion
class EmptyFile(RsError, ValueError):
    pass


class RaggedRows(RsError, ValueError):
    pass


class NonNumericField(RsError, ValueError):
    def __init__(self, row, column, value):
        super().__init__(f"non-numeric value {value!r} at row {row}, column {column}")
        self.row = row
        self.column = column
        self.value = value


class SelfLoop(RsError, ValueError):
    pass


class NonPositiveWeight(RsError, ValueError):
    pass


class MalformedLine(RsError, ValueError):
    pass
