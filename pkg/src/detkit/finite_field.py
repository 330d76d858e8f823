"""Small finite fields GF(p^k) and homogeneous forms over them.

Elements are integers in ``[0, q)``: the base-p digits are the coefficients of
a polynomial in the generator.  Extension arithmetic is table driven, which
is only sensible for the desk-scale fields used by the irreducibility search.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import BudgetExceeded, InputError
from .primes import is_prime

MAX_TABLE_ORDER = 1024
DEFAULT_FACTOR_BUDGET = 2_000_000


def _poly_mulmod(a, b, mod, p):
    # a, b: digit lists (low first); mod: monic digit list of length k+1
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    return prod[:k]


def _irreducible_modulus(p, k):
    """First monic degree-k polynomial over GF(p) with no factor of degree <= k/2."""
    for tail in itertools.product(range(p), repeat=k):
        cand = list(tail) + [1]
        if cand[0] == 0:
            continue
        ok = True
        for dd in range(1, k // 2 + 1):
            for low in itertools.product(range(p), repeat=dd):
                div = list(low) + [1]
                if _poly_rem(cand, div, p) == [0] * dd:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return cand
    raise AssertionError("no irreducible polynomial found")


def _poly_rem(a, m, p):
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm]


class GF:
    """The field with ``p**k`` elements."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if k < 1:
            raise InputError("extension degree must be positive")
        self.p = p
        self.k = k
        self.q = p ** k
        if k == 1:
            self.modulus = None
            return
        if self.q > MAX_TABLE_ORDER:
            raise BudgetExceeded(f"GF({p}^{k}) exceeds the table size cap {MAX_TABLE_ORDER}")
        self.modulus = _irreducible_modulus(p, k)
        q = self.q
        digits = [self._digits(a) for a in range(q)]
        self._add = [0] * (q * q)
        self._mul = [0] * (q * q)
        for a in range(q):
            da = digits[a]
            for b in range(q):
                db = digits[b]
                self._add[a * q + b] = self._undigits([(x + y) % p for x, y in zip(da, db)])
                self._mul[a * q + b] = self._undigits(_poly_mulmod(da, db, self.modulus, p))
        self._neg = [self._undigits([(-x) % p for x in digits[a]]) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a * q + b] == 1:
                    self._inv[a] = b
                    break

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, ds):
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self._add[a * self.q + b]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return self._neg[a]

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        return self._mul[a * self.q + b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._inv[a]

    def elements(self):
        return range(self.q)


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> GF:
    return GF(p, k)


class FFForm:
    """Homogeneous form over a `GF`; ``terms`` maps exponents to nonzero elements."""

    __slots__ = ("field", "nvars", "terms", "degree")

    def __init__(self, F: GF, nvars: int, terms: dict):
        self.field = F
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}
        if not self.terms:
            raise InputError("zero form over a finite field")
        degrees = {sum(e) for e in self.terms}
        if len(degrees) != 1:
            raise InputError("inhomogeneous form")
        self.degree = degrees.pop()

    def lift(self, F: GF) -> "FFForm":
        """The same form viewed over an extension of its prime field."""
        if F.p != self.field.p:
            raise InputError("characteristic mismatch")
        if self.field.k != 1:
            if F == self.field:
                return self
            raise InputError("can only lift from the prime field")
        return FFForm(F, self.nvars, dict(self.terms))

    def __eq__(self, other):
        return (isinstance(other, FFForm) and self.field == other.field
                and self.nvars == other.nvars and self.terms == other.terms)

    def __repr__(self):
        body = " + ".join(f"{c}*{e}" for e, c in sorted(self.terms.items(), key=lambda t: t[0][::-1], reverse=True))
        return f"FFForm({self.field!r}, {body})"


def _rtl(e):
    return e[::-1]


def ff_multiply(a: FFForm, b: FFForm) -> FFForm:
    F = a.field
    out: dict = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return FFForm(F, a.nvars, out)


def _divides_terms(F, divisor: dict, P: dict):
    """Exact quotient terms of P by divisor over F, or None."""
    lead = max(divisor, key=_rtl)
    inv = F.inv(divisor[lead])
    rem = dict(P)
    quot = {}
    while rem:
        e = max(rem, key=_rtl)
        qe = tuple(a - b for a, b in zip(e, lead))
        if any(x < 0 for x in qe):
            return None
        qc = F.mul(rem[e], inv)
        quot[qe] = qc
        for ed, cd in divisor.items():
            m = tuple(a + b for a, b in zip(ed, qe))
            v = F.sub(rem.get(m, 0), F.mul(qc, cd))
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return quot


def ff_divides(divisor: FFForm, P: FFForm):
    if divisor.degree > P.degree:
        return None
    quot = _divides_terms(P.field, divisor.terms, P.terms)
    return None if quot is None else FFForm(P.field, P.nvars, quot)


def _monomials(degree, nvars):
    if nvars == 1:
        return [(degree,)]
    out = []
    for last in range(degree, -1, -1):
        for head in _monomials(degree - last, nvars - 1):
            out.append(head + (last,))
    return out


def _normalized_vectors(F: GF, m: int):
    """All nonzero length-m vectors whose first nonzero entry is 1."""
    for lead in range(m):
        for tail in itertools.product(F.elements(), repeat=m - lead - 1):
            yield (0,) * lead + (1,) + tail


def find_factor(g: FFForm, budget: int | None = None):
    """A nontrivial factor of g of degree <= degree/2 over g's field, or None.

    Writes a candidate factor Q as Q0 + (terms involving the last variable).
    Q0 must divide g with the last variable set to zero, so Q0 ranges over
    the normalized divisors of that restriction and the remaining
    coefficients are enumerated exhaustively.
    """
    budget = DEFAULT_FACTOR_BUDGET if budget is None else budget
    F, n, d = g.field, g.nvars, g.degree
    if d <= 1:
        return None
    last = n - 1
    g0 = {e: c for e, c in g.terms.items() if e[last] == 0}
    if not g0:
        return FFForm(F, n, {tuple(int(i == last) for i in range(n)): 1})
    if n == 1:
        # x0^d with d >= 2
        return FFForm(F, n, {(1,): 1})
    spent = 0
    for e in range(1, d // 2 + 1):
        low = [m + (0,) for m in _monomials(e, n - 1)]
        high = [m for m in _monomials(e, n) if m[last] > 0]
        n_low = (F.q ** len(low) - 1) // (F.q - 1)
        n_high = F.q ** len(high)
        if n_low > budget or n_high > budget:
            raise BudgetExceeded(
                f"factor search of degree {e} over {F!r} needs more than {budget} trials")
        for vec in _normalized_vectors(F, len(low)):
            spent += 1
            q0 = {m: c for m, c in zip(low, vec) if c}
            if _divides_terms(F, q0, g0) is None:
                continue
            for upper in itertools.product(F.elements(), repeat=len(high)):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"factor search exceeded {budget} trials")
                cand = dict(q0)
                cand.update((m, c) for m, c in zip(high, upper) if c)
                if _divides_terms(F, cand, g.terms) is not None:
                    return FFForm(F, n, cand)
    return None
