"""Exact-arithmetic toolkit for the determinant method on projective curves."""

__version__ = "0.1.0"

from .constants import BoundConstants
from .errors import (
    BudgetExceeded,
    ConstructionCapReached,
    DetkitError,
    InputError,
)
from .exactla import IntMatrix
from .forms import ZERO, Form, parse_form
from .points import ProjPoint

__all__ = [
    "BoundConstants",
    "BudgetExceeded",
    "ConstructionCapReached",
    "DetkitError",
    "Form",
    "InputError",
    "IntMatrix",
    "ProjPoint",
    "ZERO",
    "parse_form",
]
