"""Exception hierarchy shared by all varwave modules."""

from __future__ import annotations

import numpy as np


class VarwaveError(Exception):
    """Base class; the CLI maps every subclass to exit code 1."""


class ParseError(VarwaveError):
    """Malformed expression source. ``offset`` is a byte offset into the UTF-8 text."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class DomainError(VarwaveError, ArithmeticError):
    """An operation was evaluated outside its domain (log of x<=0, 1/0, ...).

    ``mask`` marks the failing entries when the evaluation was vectorised,
    ``node`` is the rendered sub-expression responsible (when known).
    """

    def __init__(self, message: str, mask=None, node: str | None = None):
        self.mask = None if mask is None else np.asarray(mask, dtype=bool)
        self.node = node
        self.reason = message
        text = message if node is None else f"{message} in `{node}`"
        super().__init__(text)


class ValidityError(VarwaveError):
    """Evaluation requested outside a declared validity region."""


class MappingError(VarwaveError):
    """A mapping was applied to an incompatible speed, or composed with a mismatched one."""


class NotInvertibleError(MappingError):
    """Raised when a pointwise inverse is requested from a nonlocal mapping."""


class CFLError(VarwaveError):
    """Time step outside the stability bound of the explicit scheme."""


class InstabilityError(VarwaveError):
    def __init__(self, level: int, time: float):
        self.level = level
        self.time = time
        super().__init__(f"non-finite values at time level {level} (t={time:g})")


class DeterminacyError(VarwaveError):
    """Point outside the domain of determinacy of the initial data."""
