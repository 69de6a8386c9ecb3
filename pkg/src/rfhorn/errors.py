"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HornError(Exception):
    """Base class for every error raised by rfhorn."""


class InputError(HornError, ValueError):
    """Malformed input: unassigned variable, missing predicate entry, bad arity."""


class ParseError(InputError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")


class RecursiveSystemError(HornError):
    """The predicate dependency relation has a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        names = " -> ".join(p.name for p in self.cycle + self.cycle[:1])
        super().__init__(f"recursive dependency: {names}")


class UnresolvableAtom(HornError):
    def __init__(self, predicate):
        self.predicate = predicate
        super().__init__(f"predicate {predicate} occurs in a body but in no head")


class ResourceLimitError(HornError):
    """A configured cap (derivations, constraints, time) was exceeded."""


class EncodingError(InputError):
    """An encoder received an ill-formed problem description."""
