from fractions import Fraction

import pytest

from k3kit.algebra import (
    QQ,
    NEG_INF,
    ExprSyntaxError,
    FunctionField,
    Poly,
    Tower,
    factor_over_q,
    format_poly,
    parse_expr,
    parse_ratfn,
    tower_mul,
)


def test_parse_cubic():
    p = parse_expr("t^3+5*t^2-2")
    assert p.degree == 3
    assert p.coeffs == (Fraction(-2), Fraction(0), Fraction(5), Fraction(1))


def test_zero_polynomial_degree_sentinel():
    z = parse_expr("0")
    assert z.is_zero()
    assert z.degree is NEG_INF
    assert NEG_INF < 0 and NEG_INF < -100
    assert not (NEG_INF >= 0)


def test_parse_tower_scalar():
    tw = Tower((2, 3))
    e = parse_expr("(2/3)+4*sqrt(6)", field=tw).constant_value()
    assert e.coeffs[0] == Fraction(2, 3)
    assert e.coeffs[3] == 4  # sqrt(6) sits in the sqrt(2)*sqrt(3) slot


def test_parse_errors_carry_position():
    with pytest.raises(ExprSyntaxError):
        parse_expr("t^3 + * 2")
    with pytest.raises(ExprSyntaxError, match="outside the configured tower"):
        parse_expr("sqrt(5)", field=Tower((2, 3)))


def test_print_parse_round_trip():
    for src in ("t^3+5*t^2-2", "(t^2-1)/(t^2+t+1)", "-(2/3)*t^4+t-7"):
        v = parse_ratfn(src)
        again = parse_ratfn(repr(v))
        assert again == v


def test_tower_units_product():
    tw = Tower((2, 3))
    r1 = parse_expr("1+sqrt(2)+sqrt(6)", field=tw).constant_value()
    r1p = parse_expr("1-sqrt(2)+sqrt(6)", field=tw).constant_value()
    s = parse_expr("(sqrt(2)+sqrt(3))^2", field=tw).constant_value()
    assert tower_mul(r1, r1p) == s


def test_tower_identity_and_i_sqrt2():
    ti = Tower((-1, 2))
    x = parse_expr("3+2*i", field=ti).constant_value()
    assert x * ti.one == x
    isq2 = parse_expr("i*sqrt(2)", field=ti).constant_value()
    assert isq2 * isq2 == -2


def test_tower_mismatch_raises():
    a = Tower((2, 3)).coerce(Tower((2, 3)).sqrt_of(2))
    b = Tower((-1, 2)).sqrt_of(2)
    with pytest.raises(TypeError):
        tower_mul(a, b)


def test_conjugations_are_ring_maps_and_norm():
    tw = Tower((2, 3))
    import random

    rng = random.Random(5)
    for _ in range(25):
        a = tw.random_element(rng)
        b = tw.random_element(rng)
        for mask in range(4):
            assert (a * b).conjugate(mask) == a.conjugate(mask) * b.conjugate(mask)
            assert (a + b).conjugate(mask) == a.conjugate(mask) + b.conjugate(mask)
        if not a.is_zero():
            assert a.norm() != 0
            assert a * a.inverse() == 1


def test_factor_t3_plus_1():
    content, facs = factor_over_q(parse_expr("t^3+1"))
    assert content == 1
    assert [(repr(f), m) for f, m in facs] == [("t+1", 1), ("t^2-t+1", 1)]


def test_factor_irreducible_quadratic():
    _, facs = factor_over_q(parse_expr("t^2-4*t-4"))
    assert len(facs) == 1 and facs[0][1] == 1


def test_factor_monomial_content():
    content, facs = factor_over_q(parse_expr("16*t^2"))
    assert content == 16
    assert [(repr(f), m) for f, m in facs] == [("t", 2)]


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factor_over_q(Poly(QQ, "t", []))


def test_factor_reexpansion_large_discriminant_shape():
    g = (
        parse_expr("t^3+1") ** 4
        * parse_expr("t^2-4*t-4") ** 2
        * parse_expr("t-1")
        * parse_expr("3*t+5")
        * parse_expr("t") ** 2
    )
    content, facs = factor_over_q(g)
    prod = Poly(QQ, "t", [content])
    for f, m in facs:
        prod = prod * f ** m
    assert prod == g


def test_nested_function_field_symbolics():
    Fk = FunctionField(QQ, "k")
    sym = {"k": Fk.gen()}
    p = parse_expr("t^2-t*k+3", variable="t", field=Fk, symbols=sym)
    lhs = p ** 3 - 27 * parse_expr("t^2-t*k+1", variable="t", field=Fk, symbols=sym)
    rhs = parse_expr("t^2*(t^2-t*k+9)*(t-k)^2", variable="t", field=Fk, symbols=sym)
    assert lhs == rhs


def test_ratfn_always_reduced():
    r = parse_ratfn("(t^2-1)/(t-1)")
    assert r.is_poly() and repr(r) == "t+1"
    r2 = parse_ratfn("(t^3+t)/(t^2*(t^2+1))")
    assert repr(r2.den) == "t"
