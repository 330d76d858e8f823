"""Monomial bases, evaluation matrices, p-adic valuations and bound calculators."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .constants import BoundConstants
from .errors import BudgetExceeded, InputError
from .exactla import IntMatrix, det, independent_rows
from .forms import Form, evaluate, is_abs_irreducible_mod_p, norm
from .points import ProjPoint, is_smooth_mod_p, reduce_point_mod_p
from .primes import is_prime, primes_upto, valuation

# ---------------------------------------------------------------------------
# monomial bases


def _exponents(degree: int, nvars: int):
    if nvars == 1:
        yield (degree,)
        return
    for last in range(degree, -1, -1):
        for head in _exponents(degree - last, nvars - 1):
            yield head + (last,)


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    nvars: int
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.monomials)

    def index(self, exponent) -> int:
        return self.monomials.index(tuple(exponent))


def monomial_basis(D: int, nvars: int) -> MonomialBasis:
    """Degree-D monomials in descending right-to-left lex order."""
    if D < 0:
        raise InputError("degree must be nonnegative")
    return MonomialBasis(D, nvars, tuple(_exponents(D, nvars)))


def basis_size(D: int, nvars: int) -> int:
    return math.comb(D + nvars - 1, nvars - 1) if D >= 0 else 0


def hilbert_threshold(M: int, d: int, nvars: int) -> int:
    """|B[M]| - |B[M - d]|: the most independent points a degree-d curve can carry."""
    return basis_size(M, nvars) - basis_size(M - d, nvars)


def eval_matrix(points: Sequence[ProjPoint], basis: MonomialBasis) -> IntMatrix:
    rows = []
    for xi in points:
        if len(xi) != basis.nvars:
            raise InputError("point dimension does not match the basis")
        rows.append([math.prod(x ** k for x, k in zip(xi, m) if k) for m in basis.monomials])
    return IntMatrix(rows, cols=len(basis))


def select_independent(points: Sequence[ProjPoint], basis: MonomialBasis):
    """Greedy maximal independent subset in the given order: (tuple, rank)."""
    A = eval_matrix(points, basis)
    keep = independent_rows(A) if A.rows else []
    xi = tuple(points[i] for i in keep)
    return xi, len(xi)


# ---------------------------------------------------------------------------
# valuations at a prime


@dataclass(frozen=True)
class Cluster:
    residue: tuple[int, ...]
    multiplicity: int
    smooth: bool

    def to_json(self):
        return {"residue": list(self.residue), "multiplicity": self.multiplicity,
                "smooth": self.smooth}


@dataclass
class PrimeReport:
    p: int
    clusters: list[Cluster]
    guaranteed_valuation: int
    is_bad: bool | None = None
    observed_valuation: int | float | None = None
    delta: int | None = None

    @property
    def holds(self) -> bool | None:
        """Observed valuation reaches the guaranteed one (None if unobserved)."""
        if self.observed_valuation is None:
            return None
        return self.observed_valuation >= self.guaranteed_valuation

    def to_json(self) -> dict:
        obs = self.observed_valuation
        if obs == math.inf:
            obs = "determinant zero"
        return {
            "p": self.p,
            "is_bad": self.is_bad,
            "clusters": [c.to_json() for c in self.clusters],
            "guaranteed_valuation": self.guaranteed_valuation,
            "observed_valuation": obs,
            "delta": None if self.delta is None else str(self.delta),
            "holds": self.holds,
        }


def cluster_valuation_bound(points: Sequence[ProjPoint], p: int, f: Form) -> PrimeReport:
    """Group points by residue mod p; smooth clusters of size m force m(m-1)/2."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    counts: dict[tuple[int, ...], int] = {}
    for xi in points:
        if evaluate(f, xi.coords if isinstance(xi, ProjPoint) else xi):
            raise InputError(f"{xi} is not on the curve")
        r = reduce_point_mod_p(xi, p)
        counts[r] = counts.get(r, 0) + 1
    clusters = [Cluster(r, m, is_smooth_mod_p(f, r, p)) for r, m in counts.items()]
    guaranteed = sum(c.multiplicity * (c.multiplicity - 1) // 2 for c in clusters if c.smooth)
    return PrimeReport(p, clusters, guaranteed)


def vp_of_det(forms: Sequence[Form], points: Sequence[ProjPoint], p: int):
    """(v_p(Delta), Delta) for Delta = det(F_i(xi_j)); valuation is inf when Delta = 0."""
    if len(forms) != len(points):
        raise InputError("need as many forms as points")
    M = [[evaluate(F, tuple(xi)) for xi in points] for F in forms]
    delta = det(M)
    return valuation(delta, p), delta


def valuation_trial(f: Form, points: Sequence[ProjPoint], p: int, size: int,
                    rng: random.Random) -> tuple[PrimeReport, list[Form], tuple[ProjPoint, ...]]:
    """One random square system: distinct points, distinct monomials of one degree."""
    if size > len(points):
        raise InputError("tuple larger than the point set")
    xi = tuple(rng.sample(list(points), size))
    M = 0
    while len(monomial_basis(M, f.nvars)) < size:
        M += 1
    M += rng.randint(0, 1)
    mons = rng.sample(monomial_basis(M, f.nvars).monomials, size)
    forms = [Form.monomial(m) for m in mons]
    report = cluster_valuation_bound(xi, p, f)
    report.observed_valuation, report.delta = vp_of_det(forms, xi, p)
    return report, forms, xi


# ---------------------------------------------------------------------------
# bad primes


@dataclass(frozen=True)
class BadPrimes:
    primes: tuple[int, ...]
    pmax: int
    product: int
    norm: int
    skipped: tuple[int, ...] = ()

    @property
    def log_ratio(self) -> float | None:
        """log(prod p) / log ||f||, the empirical exponent (None if ||f|| = 1)."""
        if self.norm <= 1:
            return None
        return math.log(self.product) / math.log(self.norm)

    def to_json(self):
        return {"primes": list(self.primes), "pmax": self.pmax, "product": str(self.product),
                "norm": str(self.norm), "log_ratio": self.log_ratio,
                "skipped_over_budget": list(self.skipped)}


def bad_primes(f: Form, pmax: int, max_ext: int = 2, budget: int | None = None,
               skip_over_budget: bool = False) -> BadPrimes:
    """Primes p <= pmax where f mod p has a factor over GF(p^k), k <= max_ext."""
    bad = []
    skipped = []
    for p in primes_upto(pmax):
        try:
            if not is_abs_irreducible_mod_p(f, p, max_ext=max_ext, budget=budget):
                bad.append(p)
        except BudgetExceeded:
            if not skip_over_budget:
                raise
            skipped.append(p)
    return BadPrimes(tuple(bad), pmax, math.prod(bad), norm(f), tuple(skipped))


# ---------------------------------------------------------------------------
# calculators


def mertens_sums(x: float) -> tuple[float, float]:
    """(sum of log p / p, sum of log p) over primes p <= x."""
    if x < 2:
        raise InputError("x must be at least 2")
    ps = primes_upto(int(x))
    return math.fsum(math.log(p) / p for p in ps), math.fsum(math.log(p) for p in ps)


def _nfact_root(n: int) -> float:
    return math.factorial(n) ** (1.0 / n)


def salberger_lower_bound(s: float, p: int, d: int, n: int,
                          constants: BoundConstants | None = None) -> float:
    """Local exponent e with p^e | Delta, O-terms instantiated from constants.

    Evaluates ``n!^(1/n) n/(n+1) s^(1+1/n) / (p + c_sqrt sqrt p) - c_lin s``.
    """
    c = constants or BoundConstants()
    if s <= 0:
        return 0.0
    main = _nfact_root(n) * n / (n + 1) * s ** (1 + 1 / n)
    return main / (p + c.c_sqrt * math.sqrt(p)) - c.c_lin * s


def _loglog_clamped(normf: int) -> float:
    if normf <= 1:
        return 0.0
    return max(math.log(math.log(normf)), 0.0)


def sal2_lower_bound(s: float, normf: int, d: int, n: int,
                     constants: BoundConstants | None = None) -> float:
    """Lower bound for log|Delta| from the global determinant method."""
    c = constants or BoundConstants()
    if s < 1:
        raise InputError("s must be at least 1")
    lead = _nfact_root(n) / (n + 1) * s ** (1 + 1 / n)
    return lead * (math.log(s) - c.c_sal2 - n * _loglog_clamped(normf))
