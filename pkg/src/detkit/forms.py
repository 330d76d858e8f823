"""Sparse homogeneous forms with arbitrary-precision integer coefficients.

Terms are keyed by exponent vectors.  The one monomial order used throughout
is right-to-left lexicographic: exponents are compared starting from the last
variable, so ``x2`` outranks any power of ``x0`` or ``x1``.
"""

from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import FormSyntaxError, InhomogeneousError, InputError, ZeroFormError
from . import exactla

Exponent = tuple[int, ...]


def rtl_key(e: Exponent) -> Exponent:
    return e[::-1]


class _ZeroForm:
    """Sentinel for the zero polynomial, which is never a `Form`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return "ZERO"

    def __str__(self):
        return "0"


ZERO = _ZeroForm()


class Form:
    """Nonzero homogeneous polynomial in ``nvars`` variables over the integers."""

    __slots__ = ("nvars", "degree", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int]):
        clean = {}
        degree = None
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            c = int(c)
            if len(e) != nvars:
                raise InputError(f"exponent {e} has wrong length for {nvars} variables")
            if any(x < 0 for x in e):
                raise InputError(f"negative exponent in {e}")
            if c == 0:
                continue
            if degree is None:
                degree = sum(e)
            elif sum(e) != degree:
                raise InhomogeneousError("terms of different total degree")
            clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            raise ZeroFormError("the zero polynomial is not a Form")
        self.nvars = nvars
        self.degree = degree
        self._terms = dict(sorted(clean.items(), key=lambda t: rtl_key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def build(cls, nvars: int, terms: Mapping[Exponent, int]) -> "Form | _ZeroForm":
        """Like the constructor, but returns `ZERO` instead of raising."""
        if not any(terms.values()):
            return ZERO
        try:
            return cls(nvars, terms)
        except ZeroFormError:
            return ZERO

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "Form":
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Form":
        return cls.monomial(tuple(int(j == i) for j in range(nvars)))

    @classmethod
    def from_vector(cls, nvars: int, monomials: Sequence[Exponent], coeffs: Sequence[int]):
        return cls.build(nvars, dict(zip(monomials, coeffs)))

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        """Terms in descending right-to-left lex order."""
        return self._terms.items()

    def coeff(self, exponent: Sequence[int]) -> int:
        return self._terms.get(tuple(exponent), 0)

    def vector(self, monomials: Sequence[Exponent]) -> list[int]:
        return [self._terms.get(m, 0) for m in monomials]

    @property
    def top_coefficient(self) -> int:
        """Coefficient of ``x_{nvars-1}^degree`` (may be zero)."""
        return self._terms.get((0,) * (self.nvars - 1) + (self.degree,), 0)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.nvars == other.nvars and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Form({self.nvars}, {format_form(self)!r})"

    def __str__(self):
        return format_form(self)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Form(self.nvars, {e: -c for e, c in self._terms.items()})

    def scale(self, k: int):
        return Form.build(self.nvars, {e: k * c for e, c in self._terms.items()})

    def _combine(self, other, sign):
        if not isinstance(other, Form):
            return NotImplemented
        _check_compatible(self, other)
        if other.degree != self.degree:
            raise InhomogeneousError("cannot add forms of different degree")
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + sign * c
        return Form.build(self.nvars, terms)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Form):
            return multiply(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, point: Sequence[int]) -> int:
        return evaluate(self, point)

    def to_json(self) -> str:
        return format_form(self)


def _check_compatible(f: Form, g: Form):
    if f.nvars != g.nvars:
        raise InputError(f"variable count mismatch: {f.nvars} vs {g.nvars}")


# ---------------------------------------------------------------------------
# parsing and printing

_TERM_RE = re.compile(r"([+-])?([^+-]+)")
_FACTOR_RE = re.compile(r"\*?(?:(\d+)|x(\d+)(?:\^(\d+))?)")


def parse_form(text: str, nvars: int | None = None) -> Form:
    """Parse ``3*x0^2*x1 - x2^3`` style input.

    When ``nvars`` is omitted it is one more than the largest variable index.
    """
    s = "".join(text.split())
    if not s:
        raise FormSyntaxError("empty polynomial")
    pos = 0
    raw: list[tuple[int, dict[int, int]]] = []
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or (m.group(1) is None and pos > 0):
            raise FormSyntaxError(f"unexpected input at position {pos}: {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        coeff = 1
        powers: dict[int, int] = {}
        bpos = 0
        while bpos < len(body):
            fm = _FACTOR_RE.match(body, bpos)
            if fm is None or fm.end() == bpos or (bpos == 0 and body.startswith("*")):
                raise FormSyntaxError(f"cannot parse term {body!r}")
            if fm.group(1) is not None:
                coeff *= int(fm.group(1))
            else:
                i = int(fm.group(2))
                powers[i] = powers.get(i, 0) + int(fm.group(3) or 1)
            bpos = fm.end()
        raw.append((sign * coeff, powers))
        pos = m.end()
    top = max((i for _, p in raw for i in p), default=-1)
    if nvars is None:
        nvars = max(top + 1, 1)
    elif top >= nvars:
        raise FormSyntaxError(f"variable x{top} out of range for {nvars} variables")
    terms: dict[Exponent, int] = {}
    degrees = set()
    for c, p in raw:
        e = tuple(p.get(i, 0) for i in range(nvars))
        degrees.add(sum(e))
        terms[e] = terms.get(e, 0) + c
    if len(degrees) > 1:
        raise InhomogeneousError(f"terms have different degrees {sorted(degrees)}")
    return Form(nvars, terms)


def _format_monomial(e: Exponent) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return "*".join(parts)


def format_form(f) -> str:
    if f is ZERO:
        return "0"
    out = []
    for e, c in f.items():
        mono = _format_monomial(e)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


# ---------------------------------------------------------------------------
# basic quantities


def norm(f: Form) -> int:
    """Largest absolute value of a coefficient."""
    return max(abs(c) for c in f._terms.values())


def content(f: Form) -> int:
    return reduce(math.gcd, (abs(c) for c in f._terms.values()))


def is_primitive(f: Form) -> bool:
    return content(f) == 1


def primitive_part(f: Form) -> Form:
    g = content(f)
    lead = next(iter(f._terms.values()))
    if lead < 0:
        g = -g
    return Form(f.nvars, {e: c // g for e, c in f._terms.items()})


def evaluate(f: Form, point: Sequence[int]) -> int:
    if len(point) != f.nvars:
        raise InputError(f"point has {len(point)} coordinates, form has {f.nvars} variables")
    total = 0
    for e, c in f._terms.items():
        v = c
        for x, k in zip(point, e):
            if k:
                v *= x ** k
        total += v
    return total


def gradient(f: Form) -> list:
    """Partial derivatives; entries are Forms or `ZERO`."""
    out = []
    for i in range(f.nvars):
        terms = {}
        for e, c in f._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        out.append(Form.build(f.nvars, terms) if terms else ZERO)
    return out


# ---------------------------------------------------------------------------
# multiplication and exact division


def _mul_terms(a: Mapping[Exponent, int], b: Mapping[Exponent, int]) -> dict[Exponent, int]:
    out: dict[Exponent, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return out


def multiply(f: Form, g: Form) -> Form:
    _check_compatible(f, g)
    return Form(f.nvars, _mul_terms(f._terms, g._terms))


def leading_term_rtl(f: Form) -> tuple[Exponent, int]:
    """Greatest term in right-to-left lex order."""
    e, c = next(iter(f._terms.items()))
    return e, c


def divides(f: Form, P: Form):
    """Exact quotient h with ``P == f * h``, or None if f does not divide P.

    Division runs by leading-term elimination in right-to-left lex order.
    Raises `InputError` if P is a rational but non-integral multiple of f,
    which can only happen when f is not primitive.
    """
    _check_compatible(f, P)
    if P.degree < f.degree:
        return None
    fe, fc = leading_term_rtl(f)
    rem = dict(P._terms)
    quotient: dict[Exponent, int] = {}
    rational = False
    denominators = 1
    while rem:
        e = max(rem, key=rtl_key)
        c = rem[e]
        q_e = tuple(a - b for a, b in zip(e, fe))
        if any(x < 0 for x in q_e):
            return None
        if c % fc:
            # continue over Q by scaling everything
            rational = True
            g = fc // math.gcd(c, fc)
            rem = {k: v * g for k, v in rem.items()}
            quotient = {k: v * g for k, v in quotient.items()}
            denominators *= g
            c = rem[e]
        q = c // fc
        quotient[q_e] = quotient.get(q_e, 0) + q
        for ef, cf in f._terms.items():
            m = tuple(a + b for a, b in zip(ef, q_e))
            v = rem.get(m, 0) - q * cf
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    if rational:
        g = math.gcd(denominators, *quotient.values())
        if g != denominators:
            raise InputError("quotient is not integral (divisor is not primitive)")
        quotient = {k: v // g for k, v in quotient.items()}
    return Form(f.nvars, quotient)


def is_divisible(f: Form, P: Form) -> bool:
    """Whether f divides P over the rationals."""
    try:
        return divides(f, P) is not None
    except InputError:
        return True


# ---------------------------------------------------------------------------
# linear changes of variables


def compose_linear(f: Form, A) -> Form:
    """``f(A x)``: substitute ``x_i -> sum_j A[i][j] x_j``.  A must be unimodular."""
    A = exactla.IntMatrix.coerce(A)
    if A.rows != f.nvars or A.cols != f.nvars:
        raise InputError(f"matrix must be {f.nvars} x {f.nvars}")
    if abs(exactla.det(A)) != 1:
        raise InputError("change of variables must be unimodular")
    n = f.nvars
    unit = (0,) * n
    linear = []
    for i in range(n):
        linear.append({tuple(int(k == j) for k in range(n)): A[i, j]
                       for j in range(n) if A[i, j]})
    powers: list[list[dict]] = [[{unit: 1}] for _ in range(n)]

    def power(i, k):
        while len(powers[i]) <= k:
            powers[i].append(_mul_terms(powers[i][-1], linear[i]))
        return powers[i][k]

    total: dict[Exponent, int] = {}
    for e, c in f._terms.items():
        acc = {unit: c}
        for i, k in enumerate(e):
            if k:
                acc = _mul_terms(acc, power(i, k))
        for m, v in acc.items():
            total[m] = total.get(m, 0) + v
    return Form(n, total)


def composition_norm_factor(A, degree: int) -> int:
    """C with ``norm(f o A) <= C * norm(f)`` for every form f of this degree.

    Each monomial of degree d composed with A has coefficient sum at most
    ``(n * max|A|)^d`` and there are ``binom(d + n - 1, n - 1)`` monomials.
    """
    A = exactla.IntMatrix.coerce(A)
    n = A.rows
    return math.comb(degree + n - 1, n - 1) * (n * A.max_abs()) ** degree


def norm_ratio_bounds(f: Form, A) -> tuple[float, float, float]:
    """(lower, actual, upper) for ``norm(f o A) / norm(f)``."""
    Ainv = exactla.inverse(A)
    g = compose_linear(f, A)
    up = composition_norm_factor(A, f.degree)
    down = composition_norm_factor(Ainv, f.degree)
    return 1 / down, norm(g) / norm(f), float(up)


# ---------------------------------------------------------------------------
# reduction mod p


def reduce_mod_p(f: Form, p: int):
    """Coefficients reduced into ``[0, p)`` as a `finite_field.FFForm` over GF(p)."""
    from .finite_field import FFForm, field

    F = field(p)
    terms = {e: c % p for e, c in f._terms.items() if c % p}
    if not terms:
        raise InputError(f"form vanishes identically mod {p}")
    return FFForm(F, f.nvars, terms)


def is_abs_irreducible_mod_p(f: Form, p: int, max_ext: int = 2, budget: int | None = None) -> bool:
    """Search for a factorization of f mod p over GF(p^k), k <= max_ext.

    True when no factor of degree <= degree/2 exists over the largest field
    searched.  Desk-scale heuristic; raises `BudgetExceeded` past ``budget``.
    """
    from .finite_field import field, find_factor

    g = reduce_mod_p(f, p)
    return find_factor(g.lift(field(p, max_ext)), budget=budget) is None
