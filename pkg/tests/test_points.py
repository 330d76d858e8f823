import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import points_bruteforce

from detkit.errors import BudgetExceeded, InputError
from detkit.exactla import inverse
from detkit.forms import compose_linear, evaluate, parse_form
from detkit.points import (
    ProjPoint,
    enumerate_points,
    enumerate_points_bruteforce,
    height,
    is_smooth_mod_p,
    reduce_point_mod_p,
    transform_points,
)

CURVES = [
    "x0^2 + x1^2 - x2^2",
    "x0*x2 - x1^2",
    "x0^3 - x1^2*x2",
    "x0^3 + x1^3 - x2^3",
    "x0^2 - 2*x1^2 + x1*x2",
    "x0^2*x2 - x1^3 - x1*x2^2",
]


def test_projpoint_canonical():
    assert ProjPoint((-2, 4, -6)).coords == (1, -2, 3)
    assert ProjPoint((0, -3, 3)).coords == (0, 1, -1)
    assert ProjPoint((3, 4, 5)) == ProjPoint((-3, -4, -5))
    with pytest.raises(InputError):
        ProjPoint((0, 0, 0))


def test_height_examples():
    assert height(ProjPoint((3, 4, 5))) == 5
    assert height(ProjPoint((0, 1, -1))) == 1
    assert height(ProjPoint((4, -3, -5))) == 5


def test_enumerate_examples(conic):
    pts = enumerate_points(conic, 1)
    assert [p.coords for p in pts] == [(0, 1, -1), (0, 1, 1), (1, 0, -1), (1, 0, 1)]
    assert len(enumerate_points(conic, 5)) == 12
    assert enumerate_points(parse_form("x0^2 + x1^2 + x2^2", 3), 10) == []


def test_enumerate_errors(conic):
    with pytest.raises(InputError):
        enumerate_points(conic, 0)
    with pytest.raises(InputError):
        enumerate_points(parse_form("x0 + x1", 2), 3)
    with pytest.raises(BudgetExceeded):
        enumerate_points(conic, 50, budget=1000)


def test_budget_env(conic, monkeypatch):
    monkeypatch.setenv("DETKIT_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        enumerate_points(conic, 5)


@pytest.mark.parametrize("text", CURVES)
@pytest.mark.parametrize("N", [1, 3, 6, 10])
def test_enumerate_matches_oracle(text, N):
    f = parse_form(text, 3)
    got = [p.coords for p in enumerate_points(f, N)]
    assert got == points_bruteforce(lambda v: evaluate(f, v), 3, N)


def test_enumerate_four_variables():
    f = parse_form("x0^2 + x1^2 + x2^2 - x3^2", 4)
    got = [p.coords for p in enumerate_points(f, 4)]
    assert got == points_bruteforce(lambda v: evaluate(f, v), 4, 4)
    assert got == [p.coords for p in enumerate_points_bruteforce(f, 4)]


def test_exact_fallback_for_large_values():
    # coefficients big enough to leave the int64 fast path
    big = 10**17
    f = parse_form(f"{big}*x0^2 + {big}*x1^2 - {big}*x2^2", 3)
    assert [p.coords for p in enumerate_points(f, 5)] == [p.coords for p in
                                                           enumerate_points(parse_form("x0^2 + x1^2 - x2^2", 3), 5)]


def test_threads_do_not_change_output(cusp):
    assert enumerate_points(cusp, 30, threads=4) == enumerate_points(cusp, 30)


@pytest.mark.parametrize("text", CURVES[:3])
def test_monotone(text):
    f = parse_form(text, 3)
    prev = set()
    for N in range(1, 12):
        cur = set(enumerate_points(f, N))
        assert prev <= cur
        assert all(height(p) <= N and evaluate(f, p.coords) == 0 for p in cur)
        prev = cur


def test_reduce_mod_p_examples():
    assert reduce_point_mod_p(ProjPoint((3, 4, 5)), 2) == (1, 0, 1)
    assert reduce_point_mod_p(ProjPoint((1, 1, 1)), 2) == reduce_point_mod_p(ProjPoint((1, -1, 1)), 2) == (1, 1, 1)
    assert reduce_point_mod_p(ProjPoint((0, 1, -1)), 3) == (0, 2, 1)


def test_smooth_examples():
    f = parse_form("x0*x2 - x1^2", 3)
    assert is_smooth_mod_p(f, (1, 1, 1), 5)
    assert not is_smooth_mod_p(parse_form("x0^2 + x1^2 - x2^2", 3), (1, 1, 0), 2)
    assert is_smooth_mod_p(f, (0, 0, 1), 7)
    with pytest.raises(InputError):
        is_smooth_mod_p(f, (1, 0, 1), 5)


unimodular_3 = st.lists(st.integers(-2, 2), min_size=3, max_size=3).map(
    lambda a: [[1, 0, a[0]], [0, 1, a[1]], [a[2], 0, 1 + a[0] * a[2]]])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CURVES), unimodular_3)
def test_injection_and_height_inflation(text, A):
    f = parse_form(text, 3)
    N = 6
    g = compose_linear(f, A)
    Ainv = inverse(A)
    S = enumerate_points(f, N)
    image = transform_points(S, Ainv)
    assert len(set(image)) == len(S)
    c = 3 * Ainv.max_abs()
    zeros_g = set(enumerate_points(g, c * N))
    assert set(image) <= zeros_g
    assert all(height(p) <= c * N for p in image)
