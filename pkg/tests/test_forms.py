import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sympy_coeffs, to_sympy

from detkit.errors import FormSyntaxError, InhomogeneousError, InputError, ZeroFormError
from detkit.exactla import IntMatrix, inverse
from detkit.forms import (
    ZERO,
    Form,
    compose_linear,
    content,
    divides,
    evaluate,
    format_form,
    is_abs_irreducible_mod_p,
    is_primitive,
    leading_term_rtl,
    multiply,
    norm,
    norm_ratio_bounds,
    parse_form,
    primitive_part,
    reduce_mod_p,
)

SHEAR = [[1, 0, 1], [0, 1, -1], [0, 0, 1]]


def exponents(degree, nvars):
    if nvars == 1:
        return [(degree,)]
    return [(k,) + rest for k in range(degree + 1) for rest in exponents(degree - k, nvars - 1)]


@st.composite
def forms(draw, nvars=3, max_degree=4, coeff=9, need_top=False):
    d = draw(st.integers(1, max_degree))
    mons = exponents(d, nvars)
    coeffs = draw(st.lists(st.integers(-coeff, coeff), min_size=len(mons), max_size=len(mons)))
    if need_top and coeffs[mons.index((0,) * (nvars - 1) + (d,))] == 0:
        coeffs[mons.index((0,) * (nvars - 1) + (d,))] = draw(st.sampled_from([-2, -1, 1, 2]))
    if not any(coeffs):
        coeffs[0] = 1
    return Form(nvars, dict(zip(mons, coeffs)))


@st.composite
def unimodular(draw, n=3):
    # product of elementary matrices with entries in [-2, 2]
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 4))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i == j:
            continue
        k = draw(st.integers(-2, 2))
        A = [row[:] for row in A]
        for c in range(n):
            A[i][c] += k * A[j][c]
    return A


# -- parsing -----------------------------------------------------------------

def test_parse_examples():
    f = parse_form("x0^2 + x1^2 - x2^2", 3)
    assert len(f) == 3 and f.degree == 2
    g = parse_form("x2", 3)
    assert len(g) == 1 and g.degree == 1
    with pytest.raises(InhomogeneousError):
        parse_form("x0^2 + x1")


@pytest.mark.parametrize("bad", ["x0^^2", "3*y1", "", "x0 + - ", "x0^2 - x0^2"])
def test_parse_errors(bad):
    with pytest.raises(InputError):
        parse_form(bad, 3)


def test_zero_polynomial_is_sentinel():
    with pytest.raises(ZeroFormError):
        parse_form("x0 - x0", 3)
    f = parse_form("x0 + x1", 3)
    assert (f - f) is ZERO
    assert not ZERO


@settings(max_examples=100, deadline=None)
@given(forms())
def test_print_parse_round_trip(f):
    assert parse_form(format_form(f), 3) == f


def test_printer_order():
    assert format_form(parse_form("x0^2 + x1^2 - x2^2", 3)) == "-x2^2 + x1^2 + x0^2"
    assert format_form(parse_form("3*x0^2*x1 - x2^3", 3)) == "-x2^3 + 3*x0^2*x1"


def test_syntax_error_type():
    with pytest.raises(FormSyntaxError):
        parse_form("x0^", 3)


# -- norm, content, evaluation -----------------------------------------------

def test_norm_examples():
    assert norm(parse_form("x0^2 + x1^2 - x2^2", 3)) == 1
    assert norm(parse_form("3*x0^3 - 7*x2^3", 3)) == 7
    assert norm(compose_linear(parse_form("x0^2 - x1*x2", 3), SHEAR)) == 2


def test_content_examples():
    f = parse_form("2*x0 + 4*x1 + 6*x2", 3)
    assert content(f) == 2 and not is_primitive(f)
    assert content(parse_form("x0^2 + x1^2 - x2^2", 3)) == 1
    assert content(parse_form("6*x0^2 - 10*x1*x2 + 15*x2^2", 3)) == 1


def test_evaluate_examples():
    assert evaluate(parse_form("x0^2 + x1^2 - x2^2", 3), (3, 4, 5)) == 0
    assert evaluate(parse_form("x0*x2 - x1^2", 3), (1, -1, 1)) == 0
    assert evaluate(parse_form("x0^2 - x1*x2", 3), (1, -1, 1)) == 2


def test_big_coefficients_stay_exact():
    f = parse_form(f"{10**40}*x0^2 - x1*x2", 3)
    assert norm(f) == 10**40
    assert evaluate(f, (10**5, 1, 1)) == 10**50 - 1


# -- multiplication and division ---------------------------------------------

def test_multiply_divide_examples():
    f = parse_form("2*x2^2 + x0*x1", 3)
    h = parse_form("3*x1 + x2", 3)
    assert divides(f, multiply(f, h)) == h
    assert divides(parse_form("x0", 3), parse_form("x1^2", 3)) is None
    assert multiply(parse_form("x0 + x1", 3), parse_form("x0 - x1", 3)) == parse_form("x0^2 - x1^2", 3)


def test_multiply_matches_sympy():
    f = parse_form("2*x2^2 + x0*x1", 3)
    h = parse_form("3*x1 + x2", 3)
    ef, xs = to_sympy(f)
    eh, _ = to_sympy(h)
    assert multiply(f, h).terms == sympy_coeffs(ef * eh, xs)


def test_leading_term_examples():
    assert leading_term_rtl(parse_form("x0*x1 + x2^2", 3)) == ((0, 0, 2), 1)
    assert leading_term_rtl(parse_form("3*x1 + x2", 3)) == ((0, 0, 1), 1)
    assert leading_term_rtl(parse_form("x0^3", 3)) == ((3, 0, 0), 1)
    # c_f * w lands on x2^2 * x2
    P = multiply(parse_form("2*x2^2 + x0*x1", 3), parse_form("3*x1 + x2", 3))
    assert P.coeff((0, 0, 3)) == 2


def test_divides_nvars_mismatch():
    with pytest.raises(InputError):
        divides(parse_form("x0", 3), parse_form("x0", 4))


def test_divides_non_primitive_divisor():
    # 2x0 divides x0*x1 over Q but the quotient is not integral
    with pytest.raises(InputError):
        divides(parse_form("2*x0", 3), parse_form("x0*x1", 3))


@settings(max_examples=200, deadline=None)
@given(forms(need_top=True), forms())
def test_leading_coefficient_law(f, h):
    P = multiply(f, h)
    W, w = leading_term_rtl(h)
    top = (0,) * (f.nvars - 1) + (f.degree,)
    mono = tuple(a + b for a, b in zip(top, W))
    assert P.coeff(mono) == f.top_coefficient * w
    assert norm(P) >= abs(f.top_coefficient)


@settings(max_examples=100, deadline=None)
@given(forms(need_top=True), forms())
def test_divides_round_trip(f, h):
    f = primitive_part(f)
    assert divides(f, multiply(f, h)) == h


@settings(max_examples=100, deadline=None)
@given(forms(need_top=True), forms(max_degree=6))
def test_divides_sound_on_arbitrary_input(f, P):
    f = primitive_part(f)
    q = divides(f, P)
    assert q is None or multiply(f, q) == P
    if q is None:
        ef, xs = to_sympy(f)
        eP, _ = to_sympy(P)
        assert sp.rem(eP, ef, *xs) != 0 or P.degree < f.degree


def test_degree_additive():
    f = parse_form("x0^2 - x1*x2", 3)
    g = parse_form("x0*x1*x2 + x2^3", 3)
    assert multiply(f, g).degree == 5


# -- composition -------------------------------------------------------------

def test_compose_examples():
    f = parse_form("x0^2 - x1*x2", 3)
    assert compose_linear(f, IntMatrix.identity(3)) == f
    assert compose_linear(f, SHEAR) == parse_form("x0^2 + 2*x0*x2 - x1*x2 + 2*x2^2", 3)


def test_compose_matches_sympy():
    f = parse_form("3*x0^2*x1 - x2^3 + x0*x1*x2", 3)
    A = [[1, 2, 0], [0, 1, 0], [-1, -2, 1]]
    e, xs = to_sympy(f)
    sub = {xs[i]: sum(A[i][j] * xs[j] for j in range(3)) for i in range(3)}
    assert compose_linear(f, A).terms == sympy_coeffs(e.subs(sub, simultaneous=True), xs)


def test_compose_rejects_non_unimodular():
    with pytest.raises(InputError):
        compose_linear(parse_form("x0", 3), [[2, 0, 0], [0, 1, 0], [0, 0, 1]])


@settings(max_examples=100, deadline=None)
@given(forms(), unimodular())
def test_compose_inverse_identity(f, A):
    assert compose_linear(compose_linear(f, A), inverse(A)) == f


@settings(max_examples=100, deadline=None)
@given(forms(), unimodular(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_evaluate_compose(f, A, y):
    Ay = IntMatrix(A).apply(y)
    assert evaluate(compose_linear(f, A), y) == evaluate(f, Ay)


@settings(max_examples=100, deadline=None)
@given(forms(), unimodular())
def test_content_preserved(f, A):
    g = compose_linear(f, A)
    assert content(g) == content(f)
    assert g.degree == f.degree


@settings(max_examples=100, deadline=None)
@given(forms(), unimodular())
def test_norm_ratio_within_bounds(f, A):
    lo, actual, hi = norm_ratio_bounds(f, A)
    assert lo <= actual <= hi


# -- reduction mod p -----------------------------------------------------------

def test_irreducibility_examples():
    assert not is_abs_irreducible_mod_p(parse_form("x0^2 + x1^2 - x2^2", 3), 2)
    assert is_abs_irreducible_mod_p(parse_form("x0*x2 - x1^2", 3), 3)
    assert not is_abs_irreducible_mod_p(parse_form("x0^2 - x1^2", 3), 5)


def test_square_mod_two_by_expansion():
    # (x0 + x1 + x2)^2 - (x0^2 + x1^2 - x2^2) has only even coefficients
    x = sp.symbols("x0:3")
    diff = sp.Poly(sp.expand((x[0] + x[1] + x[2]) ** 2 - (x[0] ** 2 + x[1] ** 2 - x[2] ** 2)), *x)
    assert all(c % 2 == 0 for c in diff.coeffs())


def test_reduce_mod_p_zero():
    with pytest.raises(InputError):
        reduce_mod_p(parse_form("3*x0 + 6*x1", 3), 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_conic_irreducibility_matches_hessian(p):
    from oracles import conic_smooth_mod_p

    rng = random.Random(p)
    mons = exponents(2, 3)
    checked = 0
    while checked < 25:
        coeffs = {m: rng.randint(-4, 4) for m in mons}
        if all(c % p == 0 for c in coeffs.values()):
            continue
        f = Form(3, coeffs)
        assert is_abs_irreducible_mod_p(f, p) == conic_smooth_mod_p(coeffs, p), f
        checked += 1
