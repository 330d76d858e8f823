"""Exact integer matrix algebra.

Everything here works on Python integers; eliminations are fraction-free
(Bareiss for rank and determinants, Euclidean row/column operations for the
Hermite and Smith normal forms).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError


class IntMatrix:
    """Dense immutable matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise InputError("ragged matrix rows")
            if cols is not None and cols != width:
                raise InputError("column count mismatch")
        else:
            width = cols or 0
        self._data = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def coerce(cls, A) -> "IntMatrix":
        return A if isinstance(A, IntMatrix) else cls(A)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_json(cls, obj) -> "IntMatrix":
        return cls([[int(x) for x in row] for row in obj])

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for row in self._data for x in row)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data), cols=self.rows) if self.rows else IntMatrix([], 0)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)
        return NotImplemented

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __matmul__(self, other):
        other = IntMatrix.coerce(other)
        if self.cols != other.rows:
            raise InputError("shape mismatch in matrix product")
        cols = list(zip(*other._data)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._data],
            cols=other.cols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise InputError("vector length does not match matrix")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._data)

    def max_abs(self) -> int:
        return max((abs(x) for row in self._data for x in row), default=0)

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


def _rows(A) -> list[list[int]]:
    return [list(row) for row in IntMatrix.coerce(A)]


# ---------------------------------------------------------------------------
# Bareiss elimination


def _bareiss(M: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination.  Returns (rank, sign of row swaps)."""
    m = len(M)
    n = len(M[0]) if m else 0
    prev = 1
    rank = 0
    sign = 1
    for col in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if M[i][col]), None)
        if piv is None:
            continue
        if piv != rank:
            M[rank], M[piv] = M[piv], M[rank]
            sign = -sign
        p = M[rank][col]
        prow = M[rank]
        for i in range(rank + 1, m):
            row = M[i]
            a = row[col]
            for j in range(col + 1, n):
                row[j] = (p * row[j] - a * prow[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank, sign


def rank(A) -> int:
    M = _rows(A)
    if not M:
        return 0
    return _bareiss(M)[0]


def det(A) -> int:
    M = _rows(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    r, sign = _bareiss(M)
    if r < n:
        return 0
    return sign * M[n - 1][n - 1]


def gram_det(A) -> int:
    """det(A Aᵀ), exact."""
    A = IntMatrix.coerce(A)
    if A.rows > A.cols:
        raise InputError("gram_det expects rows <= cols")
    G = [[sum(a * b for a, b in zip(r1, r2)) for r2 in A] for r1 in A]
    return det(G)


def minors(A, k: int):
    """Yield every k x k minor of A (test oracle; combinatorial)."""
    A = IntMatrix.coerce(A)
    for rs in itertools.combinations(range(A.rows), k):
        for cs in itertools.combinations(range(A.cols), k):
            yield det([[A[i, j] for j in cs] for i in rs])


def inverse(A) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    M = _rows(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("inverse of a non-square matrix")
    if abs(det(M)) != 1:
        raise InputError("matrix is not unimodular")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                a = aug[i][col]
                aug[i] = [x - a * y for x, y in zip(aug[i], aug[col])]
    return IntMatrix([[int(x) for x in row[n:]] for row in aug])


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(A, transform: bool = True):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ A == H``, U unimodular, H in row echelon
    form with positive pivots and entries above each pivot reduced into
    ``[0, pivot)``.  ``U`` is None when ``transform`` is false.
    """
    H = _rows(A)
    m = len(H)
    n = len(H[0]) if m else IntMatrix.coerce(A).cols
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None

    def swap(i, j):
        H[i], H[j] = H[j], H[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def axpy(dst, src, q):
        # row[dst] -= q * row[src]
        if q == 0:
            return
        hs, hd = H[src], H[dst]
        for k in range(n):
            if hs[k]:
                hd[k] -= q * hs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def negate(i):
        H[i] = [-x for x in H[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    r = 0
    for col in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][col]]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(H[i][col]))
            if best != r:
                swap(r, best)
            if len(nz) == 1:
                break
            p = H[r][col]
            for i in range(r + 1, m):
                if H[i][col]:
                    axpy(i, r, H[i][col] // p)
        if not H[r][col]:
            continue
        if H[r][col] < 0:
            negate(r)
        p = H[r][col]
        for i in range(r):
            axpy(i, r, H[i][col] // p)
        r += 1
    Hm = IntMatrix(H, cols=n)
    return (Hm, IntMatrix(U, cols=m)) if transform else (Hm, None)


def echelon_pivots(H: IntMatrix) -> list[int]:
    pivots = []
    for row in H:
        j = next((j for j, x in enumerate(row) if x), None)
        if j is None:
            break
        pivots.append(j)
    return pivots


def reduce_modulo(v: Sequence[int], H: IntMatrix) -> tuple[int, ...]:
    """Reduce v by the rows of an echelon matrix H, using centred quotients.

    The result differs from v by an element of the row lattice of H and is
    zero exactly when v lies in that lattice.
    """
    v = list(v)
    for row, j in zip(H, echelon_pivots(H)):
        p = row[j]
        q = _round_div(v[j], p)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b, ties toward -inf; b > 0
    return (2 * a + b) // (2 * b)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple[int, ...]
    U: IntMatrix | None
    V: IntMatrix | None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(A, transform: bool = True) -> SmithForm:
    """Smith normal form ``U @ A @ V = diag(d1, d2, ...)`` with d1 | d2 | ...

    Only the nonzero invariant factors are listed; their count is the rank.
    """
    A = IntMatrix.coerce(A)
    M = _rows(A)
    m, n = A.rows, A.cols
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):
        if q:
            M[dst] = [a - q * b for a, b in zip(M[dst], M[src])]
            if U is not None:
                U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_axpy(dst, src, q):
        if q:
            for row in M:
                row[dst] -= q * row[src]
            if V is not None:
                for row in V:
                    row[dst] -= q * row[src]

    factors = []
    t = 0
    while t < min(m, n):
        nz = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            p = M[t][t]
            for i in range(t + 1, m):
                row_axpy(i, t, M[i][t] // p)
            for j in range(t + 1, n):
                col_axpy(j, t, M[t][j] // p)
            rest = [(abs(M[i][t]), i, None) for i in range(t + 1, m) if M[i][t]]
            rest += [(abs(M[t][j]), None, j) for j in range(t + 1, n) if M[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda x: x[0])
                if i is not None:
                    row_swap(t, i)
                else:
                    col_swap(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row into row t; the next pass shrinks the pivot
            row_axpy(t, bad[0], -1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        factors.append(M[t][t])
        t += 1
    return SmithForm(
        tuple(factors),
        IntMatrix(U, cols=m) if U is not None else None,
        IntMatrix(V, cols=n) if V is not None else None,
    )


def determinantal_divisor(A, k: int) -> int:
    """gcd of all k x k minors, via the Smith invariant factors."""
    if k < 0:
        raise InputError("order must be nonnegative")
    factors = smith_normal_form(A, transform=False).invariant_factors
    if k > len(factors):
        raise InputError(f"order {k} exceeds rank {len(factors)}; every minor vanishes")
    return math.prod(factors[:k])


# ---------------------------------------------------------------------------
# Kernels and small solutions


def _primitive(v):
    g = math.gcd(*v)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def canonical_sign(v):
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def max_norm(v) -> int:
    return max((abs(x) for x in v), default=0)


_NP_SAFE = 2**60


def _fits_int64(B) -> bool:
    m = max((abs(x) for v in B for x in v), default=0)
    return 4 * len(B[0]) * m * m < _NP_SAFE if B else True


def _pass_euclid_np(B) -> bool:
    """Greedy Euclidean pass in int64; False if entries grew past the safe range."""
    X = np.array(B, dtype=np.int64)
    sq = np.einsum("ij,ij->i", X, X)
    k = len(X)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            while True:
                dots = X @ X[i]
                safe = np.where(sq > 0, sq, 1)
                q = (2 * dots + safe) // (2 * safe)
                q[i] = 0
                q[sq == 0] = 0
                new = sq[i] - 2 * q * dots + q * q * sq
                j = int(np.argmin(new))
                if not q[j] or new[j] >= sq[i]:
                    break
                X[i] -= q[j] * X[j]
                sq[i] = new[j]
                changed = True
                if 4 * len(X[i]) * int(np.abs(X[i]).max()) ** 2 >= _NP_SAFE:
                    B[:] = X.tolist()
                    return False
    B[:] = X.tolist()
    return True


def _pass_euclid_py(B) -> None:
    dot = lambda u, w: sum(a * b for a, b in zip(u, w))
    sq = [dot(v, v) for v in B]
    changed = True
    while changed:
        changed = False
        for i in range(len(B)):
            for j in range(len(B)):
                if i == j or not sq[j]:
                    continue
                q = _round_div(dot(B[i], B[j]), sq[j])
                if q:
                    cand = [a - q * b for a, b in zip(B[i], B[j])]
                    n = dot(cand, cand)
                    if n < sq[i]:
                        B[i], sq[i] = cand, n
                        changed = True


def _pass_unit_np(B) -> None:
    """Replace b_i by b_i -+ b_j while (max-norm, squared length) drops."""
    X = np.array(B, dtype=np.int64)
    k = len(X)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            while True:
                cur = (int(np.abs(X[i]).max()), int(X[i] @ X[i]))
                best = None
                for sign in (1, -1):
                    cand = X[i] - sign * X
                    cand[i] = X[i]
                    mx = np.abs(cand).max(axis=1)
                    sq = np.einsum("ij,ij->i", cand, cand)
                    j = int(np.lexsort((sq, mx))[0])
                    val = (int(mx[j]), int(sq[j]))
                    if val < cur and (best is None or val < best[0]):
                        best = (val, cand[j].copy())
                if best is None:
                    break
                X[i] = best[1]
                changed = True
    B[:] = X.tolist()


def _pass_unit_py(B) -> None:
    key = lambda v: (max_norm(v), sum(a * a for a in v))
    changed = True
    while changed:
        changed = False
        for i in range(len(B)):
            for j in range(len(B)):
                if i == j:
                    continue
                for q in (1, -1):
                    cand = [a - q * b for a, b in zip(B[i], B[j])]
                    if key(cand) < key(B[i]):
                        B[i] = cand
                        changed = True


def size_reduce(basis: list[Sequence[int]]) -> list[tuple[int, ...]]:
    """Pairwise size reduction; each step is unimodular and shrinks a norm.

    First a Euclidean pass (subtract the nearest multiple when it strictly
    lowers the squared length), then a max-norm pass with unit multiples.
    Runs in int64 when the entries are small enough, exact ints otherwise.
    """
    B = [[int(x) for x in v] for v in basis]
    if not B:
        return []
    if not (_fits_int64(B) and _pass_euclid_np(B)):
        _pass_euclid_py(B)
    if _fits_int64(B):
        _pass_unit_np(B)
    else:
        _pass_unit_py(B)
    return [canonical_sign(tuple(int(x) for x in v)) for v in B]


def kernel_basis(A) -> list[tuple[int, ...]]:
    """Saturated basis of the right integer kernel {v : A v = 0}.

    Read off from the transform of the Hermite form of Aᵀ, then size-reduced.
    """
    A = IntMatrix.coerce(A)
    if A.cols == 0:
        return []
    if A.rows == 0:
        return [tuple(int(i == j) for j in range(A.cols)) for i in range(A.cols)]
    H, U = hermite_normal_form(A.transpose())
    r = len(echelon_pivots(H))
    basis = [U.row(i) for i in range(r, A.cols)]
    if not basis:
        return []
    # the transform rows can be huge; the Hermite form of the kernel lattice is not
    K, _ = hermite_normal_form(basis, transform=False)
    basis = [K.row(i) for i in range(K.rows) if any(K.row(i))]
    return [_primitive(v) for v in size_reduce(basis)]


def independent_rows(A) -> list[int]:
    """Indices of a greedy maximal set of linearly independent rows."""
    A = IntMatrix.coerce(A)
    chosen: list[int] = []
    echelon: list[list[int]] = []
    pivots: list[int] = []
    for i, row in enumerate(A):
        v = list(row)
        for prow, j in zip(echelon, pivots):
            if v[j]:
                a, b = prow[j], v[j]
                v = [a * x - b * y for x, y in zip(v, prow)]
                g = math.gcd(*v)
                if g > 1:
                    v = [x // g for x in v]
        j = next((j for j, x in enumerate(v) if x), None)
        if j is None:
            continue
        chosen.append(i)
        echelon.append(v)
        pivots.append(j)
    return chosen


def _iroot_ceil(x: Fraction, k: int) -> int:
    """Smallest integer B >= 0 with B**k >= x."""
    if x <= 0:
        return 0
    lo, hi = 0, 1
    while Fraction(hi) ** k < x:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** k >= x:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class BVBound:
    """Bombieri–Vaaler data for an s x r system of full row rank.

    The bound on the max-norm of some nonzero integer solution is
    ``radicand ** (1 / (2 * (r - s)))`` where ``radicand = det(A Aᵀ) / D²``.
    """

    D: int
    gram: int
    radicand: Fraction
    r_minus_s: int
    bound: Decimal
    ceiling: int

    def to_json(self) -> dict:
        return {
            "D": str(self.D),
            "gram_det": str(self.gram),
            "radicand": str(self.radicand),
            "r_minus_s": self.r_minus_s,
            "bound": format(self.bound, ".12g"),
            "ceiling": str(self.ceiling),
        }


def bv_bound(A, precision: int = 40) -> BVBound:
    A = IntMatrix.coerce(A)
    s, r = A.rows, A.cols
    if rank(A) != s:
        raise InputError("rows are linearly dependent; select independent rows first")
    if r <= s:
        raise InputError("need more unknowns than equations")
    D = determinantal_divisor(A, s)
    G = gram_det(A)
    radicand = Fraction(G, D * D)
    k = r - s
    with localcontext() as ctx:
        ctx.prec = precision
        rad = Decimal(radicand.numerator) / Decimal(radicand.denominator)
        bound = (rad.ln() / (2 * k)).exp() if rad > 0 else Decimal(0)
    return BVBound(D, G, radicand, k, bound, _iroot_ceil(radicand, 2 * k))


@dataclass(frozen=True)
class KernelSearch:
    vector: tuple[int, ...]
    max_norm: int
    bound: BVBound
    certified: bool
    exhaustive: bool


def _adjugate(M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(sub)
    return adj


def _min_vector_exhaustive(basis, radius: int):
    """Least max-norm nonzero lattice vector within [-radius, radius]^r, or None.

    Parametrises the lattice by k coordinates on which the basis projects
    injectively, so the search costs (2 radius + 1)^k.
    """
    k = len(basis)
    r = len(basis[0])
    cols = None
    for J in itertools.combinations(range(r), k):
        sub = [[v[j] for j in J] for v in basis]
        d = det(sub)
        if d:
            cols, dJ, adj = J, d, _adjugate(sub)
            break
    best = None
    for xJ in itertools.product(range(-radius, radius + 1), repeat=k):
        if not any(xJ):
            continue
        # c = xJ * sub^{-1} = xJ * adj / dJ
        num = [sum(xJ[a] * adj[a][b] for a in range(k)) for b in range(k)]
        if any(x % dJ for x in num):
            continue
        c = [x // dJ for x in num]
        v = tuple(sum(c[i] * basis[i][j] for i in range(k)) for j in range(r))
        nv = max_norm(v)
        if nv <= radius:
            key = (nv, tuple(-x for x in canonical_sign(v)))
            if best is None or key < best[0]:
                best = (key, canonical_sign(v))
    return None if best is None else best[1]


def kernel_search(A, budget: int = 2_000_000) -> KernelSearch:
    """Small nonzero kernel vector with its Bombieri–Vaaler certificate."""
    A = IntMatrix.coerce(A)
    basis = kernel_basis(A)
    if not basis:
        raise InputError("kernel is trivial")
    rows = independent_rows(A)
    bv = bv_bound(IntMatrix([A.row(i) for i in rows], cols=A.cols)) if rows else None
    key = lambda v: (max_norm(v), tuple(-x for x in v))
    best = min(basis, key=key)
    exhaustive = False
    if bv is not None:
        B = bv.ceiling
        if (2 * B + 1) ** len(basis) <= budget:
            found = _min_vector_exhaustive(basis, B)
            exhaustive = True
            if found is not None and key(found) < key(best):
                best = found
        certified = max_norm(best) <= B
    else:
        # no equations: unit vectors are optimal
        certified = True
    return KernelSearch(best, max_norm(best), bv, certified, exhaustive)


def small_kernel_vector(A, budget: int = 2_000_000) -> tuple[int, ...]:
    return kernel_search(A, budget).vector
