"""Exception types raised across the package."""


class DiamlabError(Exception):
    pass


class GroupAxiomError(DiamlabError, ValueError):
    """A multiplication table violates a group axiom.

    ``row`` and ``col`` locate the offending entry when known.
    """

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class NotNormalError(DiamlabError, ValueError):
    pass


class NotSolvableError(DiamlabError, ValueError):
    pass


class NotGeneratingError(DiamlabError, ValueError):
    pass


class UnreachableError(DiamlabError, ValueError):
    pass


class ElementLimitError(DiamlabError, ValueError):
    pass


class BudgetExceeded(DiamlabError, RuntimeError):
    pass


class HypothesisError(DiamlabError, ValueError):
    """An evaluator was called outside the hypotheses of its theorem."""


class BoundViolation(DiamlabError, RuntimeError):
    """A certified lower bound exceeded a claimed upper bound.

    This can only mean an implementation bug (or a false theorem), so it is
    never recorded as an ordinary failed verdict.
    """
