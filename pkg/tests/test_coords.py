import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detkit.constants import BoundConstants
from detkit.coords import build_shear, find_large_value_tuple, height_inflation, normalize
from detkit.errors import InputError
from detkit.exactla import IntMatrix, det, inverse
from detkit.forms import Form, content, evaluate, norm, parse_form, primitive_part
from detkit.points import enumerate_points, height, transform_points


def exponents(degree, nvars=3):
    return [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) == degree]


@st.composite
def small_forms(draw, max_degree=4):
    d = draw(st.integers(1, max_degree))
    mons = exponents(d)
    coeffs = draw(st.lists(st.integers(-9, 9), min_size=len(mons), max_size=len(mons)))
    if not any(coeffs):
        coeffs[-1] = 1
    return Form(3, dict(zip(mons, coeffs)))


def best_at_radius_one(f):
    """Brute-force maximum of |f(a0, a1, 1)| over the radius-1 box."""
    return max(abs(evaluate(f, (a, b, 1))) for a in (-1, 0, 1) for b in (-1, 0, 1))


def test_find_examples():
    f = parse_form("x0^2 - x1*x2", 3)
    a, ratio = find_large_value_tuple(f, (1, 2, 4, 8))
    assert a == (1, -1, 1) and ratio == 2 and evaluate(f, a) == 2
    assert best_at_radius_one(f) == 2
    for d in (1, 3, 5):
        a, ratio = find_large_value_tuple(parse_form(f"x2^{d}", 3))
        assert a == (0, 0, 1) and ratio == 1
    g = parse_form("x0*x1 - x2^2", 3)
    a, ratio = find_large_value_tuple(g)
    assert a == (1, -1, 1) and evaluate(g, a) == -2 and ratio == 2


def test_find_schedule_extends():
    # vanishes on the radius-0 box; the search must move on
    f = parse_form("x0*x1", 3)
    a, ratio = find_large_value_tuple(f, (0,))
    assert ratio > 0 and max(map(abs, a)) == 1


@settings(max_examples=200, deadline=None)
@given(small_forms())
def test_find_within_degree_radius(f):
    a, ratio = find_large_value_tuple(f, (1, 2, 4, 8))
    assert ratio > 0
    assert max(abs(x) for x in a[:-1]) <= max(1, f.degree)
    assert ratio == Fraction(abs(evaluate(f, a)), norm(f))


def test_shear_examples():
    assert build_shear((0, 0, 1)) == IntMatrix.identity(3)
    assert build_shear((1, -1, 1)).tolist() == [[1, 0, 1], [0, 1, -1], [0, 0, 1]]
    rng = random.Random(0)
    for _ in range(20):
        a = tuple(rng.randint(-9, 9) for _ in range(3)) + (1,)
        A = build_shear(a)
        assert det(A) == 1
        Ainv = inverse(A)
        assert Ainv.tolist() == [[int(i == j) - (a[i] if j == 3 and i < 3 else 0) for j in range(4)]
                                 for i in range(4)]
    with pytest.raises(InputError):
        build_shear((1, 2, 3))


def test_normalize_examples():
    f = parse_form("x0^2 + x1^2 - x2^2", 3)
    res = normalize(f)
    assert res.A == IntMatrix.identity(3) and res.g == f
    res = normalize(parse_form("x0^2 - x1*x2", 3))
    assert res.g == parse_form("x0^2 + 2*x0*x2 - x1*x2 + 2*x2^2", 3)
    assert abs(res.g.top_coefficient) == 2 == norm(res.g)
    cert = res.certificate()
    assert {"tuple", "ratio", "norm_before", "norm_after", "c_after", "primitive"} <= set(cert)
    assert cert["tuple"] == [1, -1, 1] and cert["c_after"] == "2" and cert["primitive"] is True


def test_normalize_round_trip():
    res = normalize(parse_form("x0^2 - x1*x2", 3))
    again = normalize(res.g, BoundConstants(box_radius_schedule=(0,)))
    assert again.g == res.g and again.A == IntMatrix.identity(3)


@settings(max_examples=100, deadline=None)
@given(small_forms())
def test_normalize_invariants(f):
    f = primitive_part(f)
    res = normalize(f)
    g, A = res.g, res.A
    assert g.degree == f.degree
    assert content(g) == content(f) == 1 and res.primitive
    assert det(A) == 1
    assert abs(g.top_coefficient) == abs(evaluate(f, res.tuple)) >= 1
    assert res.norm_ratio_lower <= norm(g) / norm(f) <= res.norm_ratio_upper
    assert res.effective_kappa == Fraction(abs(g.top_coefficient), norm(g))


@settings(max_examples=30, deadline=None)
@given(small_forms(max_degree=3))
def test_normalize_point_correspondence(f):
    f = primitive_part(f)
    res = normalize(f)
    N = 4
    S = enumerate_points(f, N)
    image = transform_points(S, res.A_inverse)
    c = res.height_inflation
    assert c == height_inflation(res.A) and c <= 3 * res.A_inverse.max_abs()
    assert len(set(image)) == len(S)
    for p in image:
        assert evaluate(res.g, p.coords) == 0
        assert height(p) <= c * N


def test_constants_validation():
    with pytest.raises(ValueError):
        BoundConstants(c_M=-1)
    with pytest.raises(ValueError):
        BoundConstants(box_radius_schedule=(2, 1))
    c = BoundConstants().replace(c_M=2.0)
    assert c.c_M == 2.0 and c.to_json()["box_radius_schedule"] == [1, 2, 4, 8]
