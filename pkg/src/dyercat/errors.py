"""Exception types shared across the package."""


class DyerError(Exception):
    """Base class for every error raised by dyercat."""


class ValidationError(DyerError):
    """A candidate Dyer graph violates one or more constraints.

    ``violations`` holds every problem found, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid Dyer graph: {lines}")


class UnknownVertex(DyerError, KeyError):
    pass


class DuplicateVertex(DyerError, ValueError):
    pass


class UnknownGenerator(DyerError, KeyError):
    pass


class ParseError(DyerError, ValueError):
    pass


class BudgetExceeded(DyerError):
    """Common parent of the search/order budget errors (CLI exit code 2)."""


class SearchBudgetExceeded(BudgetExceeded):
    pass


class OrderBudgetExceeded(BudgetExceeded):
    pass


class NotSpherical(DyerError, ValueError):
    pass


class ContainsInfiniteVertex(DyerError, ValueError):
    pass


class NotFinite(DyerError, ValueError):
    pass


class NotAPartialOrder(DyerError, ValueError):
    pass


class NotConnected(DyerError, ValueError):
    pass


class NotATree(DyerError, ValueError):
    pass


class BoundaryVertex(DyerError, ValueError):
    pass


class UnlabelableEdge(DyerError, RuntimeError):
    pass
