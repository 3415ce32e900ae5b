"""
Exception types raised by the cover solvers
All derive from built-in exceptions so callers can keep catching ValueError / RuntimeError
"""


class IStringParseError(ValueError):
    """Input text does not follow the i-string grammar or its alphabet"""


class NotPartialWordError(ValueError):
    """A partial-word-only algorithm was given a general indeterminate string"""


class CnfFormatError(ValueError):
    """Malformed DIMACS input or a clause the mismatch encoding cannot represent"""


class ResourceBudgetError(RuntimeError):
    """
    An enumeration budget or the memory threshold would be exceeded.

    Attributes:
        budget: name of the budget that was hit
        limit: configured limit
        required: amount that would have been needed (None if unknown)
        hint: what to change to proceed
    """

    def __init__(self, budget: str, limit: int | float, required: int | float | None = None, hint: str = ""):
        self.budget = budget
        self.limit = limit
        self.required = required
        self.hint = hint
        need = f"needs {required}, " if required is not None else ""
        message = f"{budget} budget exceeded ({need}limit {limit})"
        if hint:
            message = f"{message}: {hint}"
        super().__init__(message)


class SolverDisagreementError(RuntimeError):
    """Two exact algorithms returned different shortest-cover lengths"""
