"""Exact solutions and mappings for variable-speed wave equations u_tt = c^2 u_xx."""

from . import expr, fdsolve, ivp, jets, mappings, solutions, speeds
from .errors import (CFLError, DeterminacyError, DomainError, InstabilityError, MappingError,
                     NotInvertibleError, ParseError, ValidityError, VarwaveError)

__all__ = [
    "expr", "fdsolve", "ivp", "jets", "mappings", "solutions", "speeds",
    "CFLError", "DeterminacyError", "DomainError", "InstabilityError", "MappingError",
    "NotInvertibleError", "ParseError", "ValidityError", "VarwaveError",
]
__version__ = "0.1.0"
