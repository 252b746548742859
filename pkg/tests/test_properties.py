"""Randomized property suites: ring axioms, SNF, gcd and round trips."""
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from k3kit.algebra import QQ, Poly, RatFn, format_poly, parse_expr, poly_gcd, ratfn
from k3kit.lattice import _matmul, smith_normal_form

small_fraction = st.builds(
    Fraction, st.integers(min_value=-9, max_value=9), st.integers(min_value=1, max_value=6)
)
poly_strategy = st.lists(small_fraction, min_size=0, max_size=6).map(
    lambda cs: Poly(QQ, "t", cs)
)
nonzero_poly = poly_strategy.filter(lambda p: not p.is_zero())


@settings(max_examples=120, deadline=None)
@given(poly_strategy, poly_strategy, poly_strategy)
def test_poly_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(nonzero_poly, nonzero_poly, nonzero_poly)
def test_ratfn_field_axioms(a, b, c):
    x, y, z = RatFn.from_poly(a), RatFn(b, a), RatFn(c, b)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x / y) * y == x


@settings(max_examples=80, deadline=None)
@given(nonzero_poly, nonzero_poly)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    assert (a % g).is_zero()
    assert (b % g).is_zero()


@settings(max_examples=80, deadline=None)
@given(nonzero_poly, nonzero_poly)
def test_ratfn_stored_reduced(a, b):
    r = RatFn(a, b)
    assert poly_gcd(r.num, r.den).is_constant()
    assert r.den.leading() == 1


@settings(max_examples=100, deadline=None)
@given(poly_strategy)
def test_print_parse_round_trip(p):
    assert parse_expr(format_poly(p)) == p


matrix_strategy = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-50, max_value=50), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(matrix_strategy)
def test_snf_reproduction_random(A):
    U, D, V = smith_normal_form(A)
    assert _matmul(_matmul(U, A), V) == D
    n = len(A)
    diag = [D[i][i] for i in range(n)]
    for x, y in zip(diag, diag[1:]):
        if x and y:
            assert y % x == 0


def test_snf_occasionally_large():
    import random

    rng = random.Random(2024)
    for n in (10, 16, 25):
        A = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        U, D, V = smith_normal_form(A)
        assert _matmul(_matmul(U, A), V) == D
