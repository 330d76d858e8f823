"""Rational points of bounded naive height on projective hypersurfaces."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from functools import total_ordering
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError
from .forms import Form, evaluate, gradient, ZERO
from .primes import is_prime

DEFAULT_CELL_BUDGET = 10**9
_INT64_SAFE = 2**62


def cell_budget() -> int:
    env = os.environ.get("DETKIT_BUDGET")
    return int(env) if env else DEFAULT_CELL_BUDGET


@total_ordering
class ProjPoint:
    """Primitive integer vector whose first nonzero coordinate is positive."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[int]):
        coords = tuple(int(x) for x in coords)
        if not any(coords):
            raise InputError("the zero vector is not a projective point")
        g = math.gcd(*coords)
        lead = next(x for x in coords if x)
        if lead < 0:
            g = -g
        self.coords = tuple(x // g for x in coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if isinstance(other, ProjPoint):
            return self.coords == other.coords
        return NotImplemented

    def __lt__(self, other):
        return self.coords < other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ProjPoint{self.coords}"

    def to_json(self) -> list[int]:
        return list(self.coords)


def height(xi: ProjPoint | Sequence[int]) -> int:
    if not isinstance(xi, ProjPoint):
        xi = ProjPoint(xi)
    return max(abs(x) for x in xi.coords)


def _is_canonical_primitive(v) -> bool:
    lead = next((x for x in v if x), 0)
    return lead > 0 and math.gcd(*v) == 1


def _scan_slab(f: Form, N: int, x0: int) -> list[tuple[int, ...]]:
    """Zeros of f in the box with first coordinate fixed to x0 (vectorized)."""
    n = f.nvars
    rng = np.arange(-N, N + 1, dtype=np.int64)
    grids = np.meshgrid(*([rng] * (n - 1)), indexing="ij")
    total = np.zeros(grids[0].shape, dtype=np.int64)
    pow_cache = {}

    def pw(i, k):
        key = (i, k)
        if key not in pow_cache:
            pow_cache[key] = grids[i - 1] ** k
        return pow_cache[key]

    for e, c in f.items():
        term = np.full(grids[0].shape, c * x0 ** e[0], dtype=np.int64)
        for i in range(1, n):
            if e[i]:
                term = term * pw(i, e[i])
        total += term
    hits = np.argwhere(total == 0)
    out = []
    for idx in hits:
        v = (x0,) + tuple(int(rng[j]) for j in idx)
        if _is_canonical_primitive(v):
            out.append(v)
    return out


def _scan_slab_exact(f: Form, N: int, x0: int) -> list[tuple[int, ...]]:
    out = []
    for rest in product(range(-N, N + 1), repeat=f.nvars - 1):
        v = (x0,) + rest
        if _is_canonical_primitive(v) and evaluate(f, v) == 0:
            out.append(v)
    return out


def enumerate_points(f: Form, N: int, threads: int = 1, budget: int | None = None) -> list[ProjPoint]:
    """All canonical primitive zeros of f with height <= N, sorted."""
    if N < 1:
        raise InputError("height bound must be at least 1")
    if not 3 <= f.nvars <= 4:
        raise InputError("enumeration supports 3 or 4 variables")
    budget = cell_budget() if budget is None else budget
    if (2 * N + 1) ** f.nvars > budget:
        raise BudgetExceeded(f"box of {(2 * N + 1) ** f.nvars} cells exceeds cap {budget}")
    # canonical sign forces the first coordinate into [0, N]
    bound = sum(abs(c) for _, c in f.items()) * N ** f.degree
    scan = _scan_slab if bound < _INT64_SAFE else _scan_slab_exact
    slabs = range(0, N + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda x0: scan(f, N, x0), slabs))
    else:
        results = [scan(f, N, x0) for x0 in slabs]
    return sorted(ProjPoint(v) for chunk in results for v in chunk)


def count_points(f: Form, N: int, threads: int = 1) -> int:
    return len(enumerate_points(f, N, threads=threads))


def enumerate_points_bruteforce(f: Form, N: int) -> list[ProjPoint]:
    """Reference enumeration: every integer vector in the box, then dedupe."""
    seen = set()
    for v in product(range(-N, N + 1), repeat=f.nvars):
        if any(v) and evaluate(f, v) == 0:
            seen.add(ProjPoint(v))
    return sorted(p for p in seen if height(p) <= N)


def reduce_point_mod_p(xi: ProjPoint | Sequence[int], p: int) -> tuple[int, ...]:
    """Residue point over GF(p), scaled so the last nonzero coordinate is 1."""
    coords = tuple(int(x) % p for x in xi)
    if not any(coords):
        raise InputError(f"point reduces to zero mod {p}; it is not primitive")
    last = next(x for x in reversed(coords) if x)
    inv = pow(last, -1, p)
    return tuple(x * inv % p for x in coords)


def is_smooth_mod_p(f: Form, xi: ProjPoint | Sequence[int], p: int) -> bool:
    """Whether some partial derivative of f is nonzero at xi mod p."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    xi = tuple(xi)
    if evaluate(f, xi) % p:
        raise InputError(f"{xi} is not on the reduction of f mod {p}")
    for df in gradient(f):
        if df is not ZERO and evaluate(df, xi) % p:
            return True
    return False


def transform_points(points: Iterable[ProjPoint], A) -> list[ProjPoint]:
    """Canonical images ``A xi`` of projective points."""
    from .exactla import IntMatrix

    A = IntMatrix.coerce(A)
    return [ProjPoint(A.apply(xi.coords)) for xi in points]
