"""Coordinate-change verification and semantic model comparison."""
from __future__ import annotations

from fractions import Fraction

from ..algebra.parser import parse_in_domain, parse_ratfn
from ..algebra.poly import Poly
from ..algebra.ratfunc import FunctionField, RatFn
from .curvefield import CurveField, CurveFn, curve_equation_value
from .model import WModel


def base_change(model: WModel, phi: RatFn, new_var: str | None = None, name: str = "") -> WModel:
    """Pull back along a base map t = phi(u) and clear denominators."""
    if phi.is_constant():
        raise ValueError("base change must be nonconstant")
    pulled = model.substitute_parameter(phi, new_var=new_var, name=name)
    integral, _ = pulled.integral_model()
    return integral


def verify_transformation(W1: WModel, W2: WModel, tmap, xmap, ymap, symbols=None) -> bool:
    """Check that (t, x, y) = (tmap, xmap, ymap)(T, X, Y) maps W2 into W1.

    The maps are expression strings in the new parameter (named by W2's
    variable) and the coordinates X, Y.  True iff substituting them into
    W1's equation vanishes identically on W2.
    """
    dom = CurveField(W2)
    syms = {"X": dom.X(), "Y": dom.Y(), W2.var: dom.param()}
    # also allow the uppercase conventional names
    syms.setdefault("T", dom.param())
    if symbols:
        for k, v in symbols.items():
            syms[k] = dom.const(v)
    t_val = parse_in_domain(tmap, dom, variable=W2.var, symbols=syms)
    x_val = parse_in_domain(xmap, dom, variable=W2.var, symbols=syms)
    y_val = parse_in_domain(ymap, dom, variable=W2.var, symbols=syms)
    try:
        t_base = t_val.as_base()
    except ValueError:
        raise ValueError("the parameter map must not involve X or Y") from None
    value = curve_equation_value(dom, t_base, x_val, y_val, W1)
    return value.is_zero()


def short_form(model: WModel) -> tuple[RatFn, RatFn]:
    """(A, B) with an isomorphic model y^2 = x^3 + A x + B (char 0)."""
    c4, c6 = model.c4, model.c6
    A = c4 * Fraction(-1, 48)
    B = c6 * Fraction(-1, 864)
    return A, B


def models_isomorphic(W1: WModel, W2: WModel) -> RatFn | None:
    """Search for an isomorphism over the coefficient field with u^2 rational.

    Returns u^2 when the models are related by an admissible change of
    variables (x, y) -> (u^2 x, u^3 y) after completing the square, or None.
    """
    if W1.field != W2.field or W1.var != W2.var:
        return None
    if not (W1.j == W2.j):
        return None
    c41, c61 = W1.c4, W1.c6
    c42, c62 = W2.c4, W2.c6
    # u^4 = c4_1/c4_2, u^6 = c6_1/c6_2  =>  u^2 = (c6_1 c4_2)/(c4_1 c6_2)
    if not c42.is_zero() and not c62.is_zero() and not c41.is_zero() and not c61.is_zero():
        u2 = (c61 * c42) / (c41 * c62)
        if c41 == u2 * u2 * c42 and c61 == u2 ** 3 * c62:
            return u2
        return None
    if c41.is_zero() != c42.is_zero() or c61.is_zero() != c62.is_zero():
        return None
    if c41.is_zero():  # j = 0: need u^6 = c6_1/c6_2 with u^2 in the field
        ratio = c61 / c62
        u2 = _rational_cbrt(ratio)
        return u2
    ratio = c41 / c42  # j = 1728: u^4 = ratio, u^2 = sqrt(ratio)
    return _ratfn_sqrt(ratio)


def _rational_cbrt(r: RatFn) -> RatFn | None:
    """Cube root of a rational function when it exists in the same field."""
    num, den = r.num, r.den
    nf = _poly_nth_root(num, 3)
    df = _poly_nth_root(den, 3)
    if nf is None or df is None:
        return None
    return RatFn(nf, df)


def _ratfn_sqrt(r: RatFn) -> RatFn | None:
    nf = _poly_nth_root(r.num, 2)
    df = _poly_nth_root(r.den, 2)
    if nf is None or df is None:
        return None
    return RatFn(nf, df)


def _poly_nth_root(p: Poly, n: int) -> Poly | None:
    """Exact n-th root of a polynomial over Q, or None."""
    from ..algebra.fields import QQ, fraction_sqrt

    if p.is_constant():
        c = p.constant_value()
        if p.field == QQ:
            q = Fraction(c)
            if n == 2:
                s = fraction_sqrt(q)
                return None if s is None else Poly.const(p.field, p.var, s)
            if n == 3:
                from ..algebra.fields import squarefree_decompose

                def icbrt(m: int):
                    if m < 0:
                        r = icbrt(-m)
                        return None if r is None else -r
                    r = round(m ** (1 / 3)) if m else 0
                    for cand in (r - 1, r, r + 1):
                        if cand >= 0 and cand ** 3 == m:
                            return cand
                    return None

                a, b = icbrt(q.numerator), icbrt(q.denominator)
                if a is None or b is None:
                    return None
                return Poly.const(p.field, p.var, Fraction(a, b))
        return None
    if p.degree % n:
        return None
    # Newton-style: factor and take root of each factor's multiplicity
    from ..algebra.factor import factor_over_field

    content, facs = factor_over_field(p)
    root_content = _poly_nth_root(Poly.const(p.field, p.var, content), n)
    if root_content is None:
        return None
    out = root_content
    for q, m in facs:
        if m % n:
            return None
        out = out * q ** (m // n)
    return out


def semantic_model_equal(W1: WModel, W2: WModel) -> bool:
    """Equality as fibrations: exact coefficients, else isomorphism search."""
    if W1.coefficients() == W2.coefficients():
        return True
    return models_isomorphic(W1, W2) is not None
