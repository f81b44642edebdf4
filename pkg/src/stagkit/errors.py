"""Exception hierarchy for the toolkit.

Every error raised by the library derives from :class:`StagError`, so callers
can catch one type at the boundary (the CLI does exactly that).
"""

from __future__ import annotations


class StagError(Exception):
    """Base class for all toolkit errors."""


class AddressError(StagError):
    """A tree address does not resolve in the tree it was used against."""


class SiteError(StagError):
    """An operation was attempted at a node that is not a legal site for it."""


class AdjunctionError(StagError):
    """Adjunction preconditions (kind, label, foot) are violated."""


class ConstraintError(StagError):
    """An adjoining constraint forbids the attempted operation."""


class MultiAdjunctionError(StagError):
    """A same-address stack violates the modifier/predicative discipline."""


class DerivationError(StagError):
    """A derivation tree is ill-formed for the grammar it was used with."""


class GrammarError(StagError):
    """A grammar object violates a structural invariant."""


class StateError(StagError):
    """A rewriting state was constructed from unsuitable material."""


class LinkError(StagError):
    """A rewriting step named a link that is not present in the state."""


class LexiconError(StagError):
    """An input token is not in the grammar's terminal alphabet."""


class LoadError(StagError):
    """A grammar document failed to parse; carries line/column information."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
