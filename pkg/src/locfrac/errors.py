"""Exception types and the enumeration step budget."""

from __future__ import annotations


class LocfracError(Exception):
    """Base class for engine errors."""


class BudgetExhausted(LocfracError):
    """An enumeration ran out of steps before finishing.

    Distinct from a negative answer: the search was not completed.
    """

    def __init__(self, what: str, limit: int):
        super().__init__(f"step budget of {limit} exhausted during {what}")
        self.what = what
        self.limit = limit


class FormulaUnsupported(LocfracError):
    """The requested Hom formula needs axioms the system does not satisfy."""

    def __init__(self, formula: str, failed: list[str]):
        super().__init__(f"formula {formula!r} unsupported: failed {', '.join(failed)}")
        self.formula = formula
        self.failed = failed


class SideUnsupported(FormulaUnsupported):
    pass


class CompletionNotFound(LocfracError):
    """A square completion that the axioms promise could not be found."""


class InternalInconsistency(LocfracError):
    """Two computations that must agree did not; carries witnesses."""

    def __init__(self, message: str, witnesses: list | None = None):
        super().__init__(message)
        self.witnesses = witnesses or []


class ConstructionFailed(LocfracError):
    """A linear system in a triangle construction had no solution."""

    def __init__(self, step: str, detail: dict | None = None):
        super().__init__(f"construction failed at step {step!r}")
        self.step = step
        self.detail = detail or {}


class FixtureError(LocfracError):
    """Malformed fixture input; ``path`` names the offending key."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class Budget:
    """Counts enumeration steps and raises once the limit is passed.

    ``Budget(None)`` never runs out.
    """

    def __init__(self, limit: int | None = None):
        if limit is not None and limit <= 0:
            raise ValueError("budget must be positive")
        self.limit = limit
        self.used = 0

    def tick(self, what: str = "enumeration", n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(what, self.limit)


def ensure_budget(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget(None)
