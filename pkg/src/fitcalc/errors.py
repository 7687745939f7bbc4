"""Exception hierarchy shared by every fitcalc module."""


class FitcalcError(Exception):
    """Base class for all errors raised by fitcalc."""


class RingMismatchError(FitcalcError, ValueError):
    """Operands live over different polynomial rings."""


class UnknownVariableError(FitcalcError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown variable"


class ParseError(FitcalcError, ValueError):
    """Malformed polynomial text or problem file.

    ``position`` is the 0-based character offset (or line number for problem
    files, see ``line``) where parsing stopped.
    """

    def __init__(self, message: str, text: str = "", position: int | None = None,
                 line: int | None = None):
        self.message = message
        self.text = text
        self.position = position
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.position is not None:
            where.append(f"col {self.position + 1}")
        prefix = f"[{', '.join(where)}] " if where else ""
        out = prefix + self.message
        if self.text and self.position is not None:
            out += f"\n  {self.text}\n  {' ' * self.position}^"
        return out


class BudgetExceeded(FitcalcError, RuntimeError):
    """A Groebner computation ran past its reduction-step budget."""

    def __init__(self, steps: int, budget: int):
        self.steps = steps
        self.budget = budget
        super().__init__(f"reduction step budget exhausted ({steps} > {budget})")


class ComputationError(FitcalcError, RuntimeError):
    """A mathematical precondition failed during a computation."""


class NotFiniteError(ComputationError):
    """The map germ is not finite (infinite staircase)."""


class PresentationError(ComputationError):
    """No presentation matrix could be obtained, or it was not validated."""
