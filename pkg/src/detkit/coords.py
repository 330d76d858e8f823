"""Unimodular change of coordinates making the ``x_last^d`` coefficient large."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .constants import BoundConstants
from .errors import InputError
from .exactla import IntMatrix, det, inverse
from .forms import Form, compose_linear, composition_norm_factor, content, evaluate, norm

__all__ = [
    "BoundConstants",
    "Normalization",
    "build_shear",
    "find_large_value_tuple",
    "height_inflation",
    "normalize",
]


def _scan_key(a: Sequence[int]):
    # scan order 0, 1, -1, 2, -2, ... in each coordinate
    return tuple((abs(x), x < 0) for x in a)


def find_large_value_tuple(f: Form, schedule: Sequence[int] = (1, 2, 4, 8)):
    """Integer tuple ``(a_0, ..., a_n, 1)`` maximizing ``|f(a)| / ||f||``.

    Radii are tried in order and the first radius with a nonzero value wins.
    Ties go to the earliest tuple in the scan order 0, 1, -1, 2, -2, ...
    If the schedule runs out the radius keeps doubling; a nonzero form of
    degree d cannot vanish on a box of side 2R + 1 > d.
    """
    n = f.nvars - 1
    radii = list(schedule)
    nf = norm(f)
    while True:
        if not radii:
            last = max(schedule, default=0)
            radii = [max(1, 2 * last)]
            schedule = tuple(schedule) + tuple(radii)
        R = radii.pop(0)
        best = None
        for head in product(range(-R, R + 1), repeat=n):
            a = head + (1,)
            v = abs(evaluate(f, a))
            if not v:
                continue
            key = (-v, _scan_key(head))
            if best is None or key < best[0]:
                best = (key, a, v)
        if best is not None:
            _, a, v = best
            return a, Fraction(v, nf)


def build_shear(a: Sequence[int]) -> IntMatrix:
    """Identity plus ``(a_0, ..., a_n, 0)`` in the last column."""
    a = tuple(int(x) for x in a)
    if not a or a[-1] != 1:
        raise InputError("shear tuple must end in 1")
    n = len(a)
    return IntMatrix([[int(i == j) + (a[i] if j == n - 1 and i < n - 1 else 0)
                       for j in range(n)] for i in range(n)])


def height_inflation(A) -> int:
    """c with ``height(A^-1 xi) <= c * height(xi)``."""
    Ainv = inverse(A)
    return Ainv.rows * Ainv.max_abs()


@dataclass(frozen=True)
class Normalization:
    g: Form
    A: IntMatrix
    tuple: tuple[int, ...]
    ratio: Fraction              # |f(a)| / ||f||
    norm_before: int
    norm_after: int
    c_after: int
    primitive: bool
    norm_ratio_lower: float
    norm_ratio_upper: float

    @property
    def effective_kappa(self) -> Fraction:
        """|c_g| / ||g||, the class-V constant actually achieved."""
        return Fraction(abs(self.c_after), self.norm_after)

    @property
    def A_inverse(self) -> IntMatrix:
        return inverse(self.A)

    @property
    def height_inflation(self) -> int:
        return height_inflation(self.A)

    def certificate(self) -> dict:
        return {
            "tuple": list(self.tuple),
            "ratio": str(self.ratio),
            "norm_before": str(self.norm_before),
            "norm_after": str(self.norm_after),
            "c_after": str(self.c_after),
            "primitive": self.primitive,
            "effective_kappa": str(self.effective_kappa),
            "norm_ratio": str(Fraction(self.norm_after, self.norm_before)),
            "norm_ratio_bounds": [self.norm_ratio_lower, self.norm_ratio_upper],
            "det_A": det(self.A),
            "height_inflation": self.height_inflation,
        }


def normalize(f: Form, constants: BoundConstants | None = None) -> Normalization:
    """Return ``g = f o A`` with A a bounded shear and ``c_g = f(a)``.

    Forms whose top coefficient already attains the norm are left alone.
    """
    constants = constants or BoundConstants()
    n = f.nvars
    nf = norm(f)
    if abs(f.top_coefficient) == nf:
        a = (0,) * (n - 1) + (1,)
        ratio = Fraction(1)
    else:
        a, ratio = find_large_value_tuple(f, constants.box_radius_schedule)
    A = build_shear(a)
    g = compose_linear(f, A)
    up = composition_norm_factor(A, f.degree)
    down = composition_norm_factor(inverse(A), f.degree)
    return Normalization(
        g=g,
        A=A,
        tuple=tuple(a),
        ratio=ratio,
        norm_before=nf,
        norm_after=norm(g),
        c_after=g.top_coefficient,
        primitive=content(g) == 1,
        norm_ratio_lower=1 / down,
        norm_ratio_upper=float(up),
    )
