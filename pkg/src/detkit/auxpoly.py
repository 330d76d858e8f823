"""Construction of an integer form vanishing on all points of bounded height.

`construct` raises the degree M until the points of height <= N impose fewer
conditions on degree-M forms than the Hilbert function of the curve allows;
at that degree the integer kernel of the evaluation matrix contains a form
that is not a multiple of f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .constants import BoundConstants
from .detmethod import (
    basis_size,
    eval_matrix,
    hilbert_threshold,
    monomial_basis,
    sal2_lower_bound,
    select_independent,
)
from .errors import ConstructionCapReached, InputError
from .exactla import (
    BVBound,
    bv_bound,
    canonical_sign,
    hermite_normal_form,
    kernel_basis,
    max_norm,
    reduce_modulo,
)
from .forms import (
    Form,
    content,
    divides,
    evaluate,
    format_form,
    is_divisible,
    multiply,
    norm,
    primitive_part,
)
from .points import ProjPoint, enumerate_points

_EPS = 1e-9


def _log_factor(normf: int, c_add: float) -> float:
    return (math.log(normf) if normf > 1 else 0.0) + c_add


def degree_bound(d: int, n: int, N: int, normf: int, constants: BoundConstants | None = None) -> int:
    """Starting degree ``ceil(c_M N^a (log||f|| + c_add) ||f||^-b)``, at least d.

    ``a = (n+1) / (n d^(1/n))`` and ``b = 1 / (n d^(1+1/n))``.
    """
    c = constants or BoundConstants()
    if d < 1 or N < 1 or normf < 1:
        raise InputError("need d >= 1, N >= 1 and ||f|| >= 1")
    a = (n + 1) / (n * d ** (1 / n))
    b = 1 / (n * d ** (1 + 1 / n))
    val = c.c_M * N ** a * _log_factor(normf, c.c_add) * math.exp(-b * math.log(normf))
    return max(d, math.ceil(val - _EPS))


def count_points_bound(d: int, n: int, N: int, normf: int,
                       constants: BoundConstants | None = None) -> dict:
    """Point-count bound ``c N^(2/d) (log||f|| + c_add) ||f||^(-1/d^2) + c'``.

    Also reports the uniform ``N^(2/d)`` for comparison.
    """
    c = constants or BoundConstants()
    clean = N ** (2 / d)
    value = (c.c_count * clean * _log_factor(normf, c.c_add)
             * math.exp(-math.log(normf) / d ** 2) + c.c_count_add)
    return {"bound": value, "uniform": clean, "n_exponent": 2 / d}


def audit_inequality(s: int, M: int, N: int, normf: int, d: int, n: int,
                     constants: BoundConstants | None = None) -> dict:
    """Both sides of the size estimates that rule out the failure branch.

    Nothing here is asserted; the report says which side dominates.
    """
    c = constants or BoundConstants()
    logN = math.log(N)
    logs = math.log(s) if s > 0 else 0.0
    stirling = (s + 1) / 2 * logs + (n + 1) / 2 * s * math.log(M) + M * s * logN
    gram_upper = (n + 2) * s * logs + M * s * logN
    det_lower = sal2_lower_bound(s, normf, d, n, c) if s >= 1 else 0.0
    frame_exp = M ** (n + 1) / math.factorial(n + 1)
    frame_log = frame_exp * math.log(c.kappa_V * normf) if c.kappa_V > 0 else 0.0
    rhs = M * s * logN - frame_log
    loglog = max(math.log(math.log(normf)), 0.0) if normf > math.e else 0.0
    scaled_lhs = n * d ** (1 / n) / (n + 1) * (math.log(M) - c.c_sal2 - loglog)
    scaled_rhs = logN - math.log(normf) / (d * (n + 1))
    return {
        "inputs": {"s": s, "M": M, "N": N, "normf": str(normf), "d": d, "n": n},
        "log_sqrt_gram_upper_stirling": stirling,
        "log_sqrt_gram_upper": gram_upper,
        "log_D_lower": det_lower,
        "frame_exponent_main": frame_exp,
        "frame_log_lower": frame_log,
        "combined": {"lhs": det_lower, "rhs": rhs, "lhs_dominates": det_lower > rhs},
        "per_unit": {"lhs": scaled_lhs, "rhs": scaled_rhs, "lhs_dominates": scaled_lhs > scaled_rhs},
    }


def bezout_check(f: Form, g: Form, S: Sequence[ProjPoint]) -> bool:
    """|S| <= deg f * deg g for common zeros S of f and g with f not dividing g."""
    if f.nvars != 3 or g.nvars != 3:
        raise InputError("Bezout count is for plane curves (3 variables)")
    if is_divisible(f, g):
        raise InputError("f divides g; Bezout does not apply")
    for xi in S:
        if evaluate(f, tuple(xi)) or evaluate(g, tuple(xi)):
            raise InputError(f"{xi} is not a common zero")
    return len(S) <= f.degree * g.degree


@dataclass
class Attempt:
    M: int
    r: int
    threshold: int
    s: int

    @property
    def success(self) -> bool:
        return self.s < self.threshold

    def to_json(self):
        return {"M": self.M, "r": self.r, "threshold": self.threshold, "s": self.s,
                "kernel_dim": self.r - self.s, "success": self.success}


@dataclass
class AuxResult:
    f: Form
    g: Form
    M: int
    N: int
    S: list[ProjPoint]
    xi: tuple[ProjPoint, ...]
    s: int
    r: int
    threshold: int
    bv: BVBound | None
    checks: dict
    attempts: list[Attempt] = field(default_factory=list)
    degenerate: bool = False
    audit: dict = field(default_factory=dict)

    def recheck(self) -> dict:
        """Recompute every check from the other fields."""
        vanishes = all(evaluate(self.g, tuple(xi)) == 0 for xi in self.S)
        not_div = not is_divisible(self.f, self.g)
        bez = None
        if self.f.nvars == 3 and vanishes and not_div:
            bez = bezout_check(self.f, self.g, self.S)
        return {"vanishes_on_S": vanishes, "not_divisible_by_f": not_div, "bezout_ok": bez}

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_json(self) -> dict:
        return {
            "f": format_form(self.f),
            "g": format_form(self.g),
            "M": self.M,
            "N": self.N,
            "points": [xi.to_json() for xi in self.S],
            "xi": [xi.to_json() for xi in self.xi],
            "s": self.s,
            "r": self.r,
            "threshold": self.threshold,
            "bv": None if self.bv is None else self.bv.to_json(),
            "checks": self.checks,
            "attempts": [a.to_json() for a in self.attempts],
            "degenerate": self.degenerate,
            "audit": self.audit,
        }


def multiples_lattice(f: Form, M: int):
    """Coefficient vectors of f * m for m of degree M - d, in the degree-M basis."""
    basis = monomial_basis(M, f.nvars)
    if M < f.degree:
        return basis, []
    rows = []
    for m in monomial_basis(M - f.degree, f.nvars).monomials:
        rows.append(multiply(f, Form.monomial(m)).vector(basis.monomials))
    return basis, rows


def _empty_locus_form(f: Form, M: int) -> Form:
    for m in reversed(monomial_basis(M, f.nvars).monomials):
        g = Form.monomial(m)
        if not is_divisible(f, g):
            return g
    raise AssertionError("every monomial is divisible by f")


def _shrink(v, rows):
    """Subtract nearest multiples of lattice rows while the squared length drops."""
    v = list(v)
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    changed = True
    while changed:
        changed = False
        for row in rows:
            nr = dot(row, row)
            q = (2 * dot(v, row) + nr) // (2 * nr)
            if q:
                cand = [a - q * b for a, b in zip(v, row)]
                if dot(cand, cand) < dot(v, v):
                    v = cand
                    changed = True
    return tuple(v)


def _outside_span(f: Form, kernel, basis, lattice_rows):
    """Kernel vector not in the span of the multiples of f, least max-norm then lex.

    Candidates are the kernel basis vectors reduced modulo the Hermite form of
    the multiples lattice, then shrunk against the (short) multiples of f.
    """
    if lattice_rows:
        H, _ = hermite_normal_form(lattice_rows, transform=False)
        residuals = [reduce_modulo(v, H) for v in kernel]
    else:
        residuals = list(kernel)
    cands = []
    for v in residuals + list(kernel):
        v = _shrink(v, lattice_rows)
        if not any(v):
            continue
        g = math.gcd(*v)
        v = canonical_sign(tuple(x // g for x in v))
        cands.append(v)
    cands = sorted(set(cands), key=lambda v: (max_norm(v), v))
    for v in cands:
        g = Form.from_vector(f.nvars, basis.monomials, v)
        if not is_divisible(f, g):
            return v, g
    return None, None


def kernel_forms(f: Form, S: Sequence[ProjPoint], M: int) -> list[Form]:
    """Forms of degree M for a saturated basis of the integer kernel on S."""
    basis = monomial_basis(M, f.nvars)
    xi, _ = select_independent(S, basis)
    K = kernel_basis(eval_matrix(xi, basis))
    return [Form.from_vector(f.nvars, basis.monomials, v) for v in K]


def construct(f: Form, N: int, M_start: int | None = None,
              constants: BoundConstants | None = None, escalate: bool = True,
              points: Sequence[ProjPoint] | None = None, threads: int = 1) -> AuxResult:
    """Find g of degree M with g = 0 on all points of height <= N and f not dividing g.

    ``points`` overrides the enumeration (used after a change of coordinates).
    Raises `ConstructionCapReached` when M passes 4x the degree bound, or at
    once on failure when ``escalate`` is false.
    """
    c = constants or BoundConstants()
    if f.nvars not in (3, 4):
        raise InputError("construct supports 3 or 4 variables")
    if content(f) != 1:
        raise InputError("f must be primitive")
    d, n = f.degree, f.nvars - 2
    nf = norm(f)
    S = sorted(points) if points is not None else enumerate_points(f, N, threads=threads)
    base = degree_bound(d, n, N, nf, c)
    M = base if M_start is None else M_start
    if M < 0:
        raise InputError("degree must be nonnegative")
    cap = max(4 * base, M)

    if not S:
        g = _empty_locus_form(f, M)
        return AuxResult(f, g, M, N, [], (), 0, basis_size(M, f.nvars),
                         hilbert_threshold(M, d, f.nvars), None,
                         {"vanishes_on_S": True, "not_divisible_by_f": True, "bezout_ok": True},
                         degenerate=True)

    attempts: list[Attempt] = []
    while True:
        basis = monomial_basis(M, f.nvars)
        xi, s = select_independent(S, basis)
        thr = hilbert_threshold(M, d, f.nvars)
        attempt = Attempt(M, len(basis), thr, s)
        attempts.append(attempt)
        if attempt.success:
            break
        if not escalate or M + 1 > cap:
            raise ConstructionCapReached(
                f"no auxiliary form up to degree {M} (cap {cap}): every vanishing form is a multiple of f",
                attempts,
            )
        M += 1

    A = eval_matrix(xi, basis)
    K = kernel_basis(A)
    _, rows = multiples_lattice(f, M)
    vec, g = _outside_span(f, K, basis, rows)
    if g is None:
        raise AssertionError("kernel larger than the multiples of f but no vector outside")
    g = primitive_part(g)
    bv = bv_bound(A) if s < len(basis) else None
    result = AuxResult(f, g, M, N, list(S), xi, s, len(basis), thr, bv, {}, attempts)
    result.checks = result.recheck()
    audit = audit_inequality(s, M, N, nf, d, n, c)
    if bv is not None:
        audit["observed"] = {
            "log_sqrt_gram": math.log(bv.gram) / 2 if bv.gram > 0 else None,
            "log_D": math.log(bv.D),
            "g_max_norm": str(norm(g)),
            "frame_lhs_log": (bv.r_minus_s * math.log(norm(g))),
            "frame_rhs_log": (math.log(bv.gram) / 2 - math.log(bv.D)) if bv.gram > 0 else None,
        }
    result.audit = audit
    return result
