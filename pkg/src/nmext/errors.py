"""Exception hierarchy shared by every module of the toolkit."""


class NmExtError(Exception):
    """Base class for all toolkit errors."""


class LengthError(NmExtError, ValueError):
    """An input has the wrong number of bits or symbols."""


class FieldMismatchError(NmExtError, ValueError):
    """Field elements of different widths or moduli were combined."""


class ParameterError(NmExtError, ValueError):
    """A construction was asked for parameters it cannot realize."""


class PlanError(NmExtError, ValueError):
    """A parameter plan violates one of its constraints.

    ``constraint`` names the violated relation so callers (and the CLI) can
    report it verbatim.
    """

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        self.detail = detail
        msg = f"constraint violated: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class BudgetExceeded(NmExtError):
    """An exact enumeration would exceed the plan's evaluation budget."""

    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} evaluations, budget is {budget}")
