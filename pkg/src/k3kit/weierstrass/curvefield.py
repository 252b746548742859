"""Arithmetic in the function field of a Weierstrass curve.

Elements are (u(X) + v(X) Y) / d(X) with u, v, d in K(t)[X], reduced by the
curve relation Y^2 = S(X) - (a1 X + a3) Y.  This is what powers exact
"substitute the map and check the identity" verifications for coordinate
changes and isogeny formulas.
"""
from __future__ import annotations

from fractions import Fraction

from ..algebra.poly import Poly, poly_gcd
from ..algebra.ratfunc import FunctionField, RatFn
from .model import WModel

_XVAR = "X@"


def _low_degree(p: Poly) -> int:
    """Number of trailing zero coefficients; large for the zero polynomial."""
    if p.is_zero():
        return 1 << 30
    for i, c in enumerate(p.coeffs):
        if not (c == p.field.zero):
            return i
    return 0


class CurveField:
    """Domain object for CurveFn elements attached to one model."""

    def __init__(self, model: WModel):
        self.model = model
        self.base = FunctionField(model.field, model.var)
        self.polyfield = self.base  # coefficients of the X-polynomials
        self.one_poly = Poly.const(self.base, _XVAR, self.base.one)
        self.zero_poly = Poly(self.base, _XVAR, [])
        # S(X) = X^3 + a2 X^2 + a4 X + a6 and the linear form a1 X + a3
        self.S = Poly(self.base, _XVAR, [model.a6, model.a4, model.a2, self.base.one])
        self.lin = Poly(self.base, _XVAR, [model.a3, model.a1])

    # --- element constructors -------------------------------------------
    def elem(self, u: Poly, v: Poly, d: Poly) -> "CurveFn":
        return CurveFn(self, u, v, d)

    def const(self, value) -> "CurveFn":
        return self.elem(Poly.const(self.base, _XVAR, self.base.coerce(value)), self.zero_poly, self.one_poly)

    def X(self) -> "CurveFn":
        return self.elem(Poly.gen(self.base, _XVAR), self.zero_poly, self.one_poly)

    def Y(self) -> "CurveFn":
        return self.elem(self.zero_poly, self.one_poly, self.one_poly)

    def param(self) -> "CurveFn":
        return self.const(self.base.gen())

    # --- parser-domain protocol ------------------------------------------
    @property
    def zero(self) -> "CurveFn":
        return self.const(self.base.zero)

    @property
    def one(self) -> "CurveFn":
        return self.const(self.base.one)

    def from_fraction(self, q) -> "CurveFn":
        return self.const(self.base.from_fraction(q))

    def coerce(self, x) -> "CurveFn":
        if isinstance(x, CurveFn):
            if x.domain is self or x.domain.model == self.model:
                return x
            raise TypeError("curve-field mismatch")
        return self.const(self.base.coerce(x))

    def is_element(self, x) -> bool:
        if isinstance(x, CurveFn):
            return x.domain.model == self.model
        return self.base.is_element(x)

    def gen(self) -> "CurveFn":
        return self.param()

    def sqrt_of(self, d: int):
        v = self.base.sqrt_of(d)
        return None if v is None else self.const(v)

    def to_rational(self, x):
        return self.base.to_rational(self.coerce(x).as_base())


class CurveFn:
    """(u + v Y)/d reduced modulo the curve equation."""

    __slots__ = ("domain", "u", "v", "d")

    def __init__(self, domain: CurveField, u: Poly, v: Poly, d: Poly):
        if d.is_zero():
            raise ZeroDivisionError("curve function with zero denominator")
        # cheap normalization only: strip a common power of X, make d monic.
        # (full gcd over K(t)[X] blows up coefficient sizes.)
        shift = min(_low_degree(u), _low_degree(v), _low_degree(d))
        if shift:
            u = Poly(u.field, u.var, u.coeffs[shift:])
            v = Poly(v.field, v.var, v.coeffs[shift:])
            d = Poly(d.field, d.var, d.coeffs[shift:])
        lead = d.leading()
        if not (lead == domain.base.one):
            inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
            u, v, d = u * inv, v * inv, d * inv
        self.domain = domain
        self.u, self.v, self.d = u, v, d

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def is_base(self) -> bool:
        return self.v.is_zero() and self.u.degree <= 0 and self.d.degree <= 0

    def as_base(self) -> RatFn:
        """Extract the underlying K(t) value for X,Y-free elements."""
        if not self.v.is_zero() or self.u.degree > 0 or self.d.degree > 0:
            raise ValueError("element genuinely involves the curve coordinates")
        num = self.u.constant_value() if self.u.coeffs else self.domain.base.zero
        den = self.d.constant_value()
        return num / den

    def _coerce(self, other) -> "CurveFn":
        if isinstance(other, CurveFn):
            return other
        return self.domain.coerce(other)

    def __add__(self, other):
        o = self._coerce(other)
        return CurveFn(
            self.domain,
            self.u * o.d + o.u * self.d,
            self.v * o.d + o.v * self.d,
            self.d * o.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return CurveFn(self.domain, -self.u, -self.v, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        dom = self.domain
        uu = self.u * o.u
        uv = self.u * o.v + self.v * o.u
        vv = self.v * o.v
        # Y^2 = S - lin*Y
        u = uu + vv * dom.S
        v = uv - vv * dom.lin
        return CurveFn(dom, u, v, self.d * o.d)

    __rmul__ = __mul__

    def conjugate(self) -> "CurveFn":
        """Image under Y -> -Y - a1 X - a3 (the elliptic involution)."""
        return CurveFn(self.domain, self.u - self.v * self.domain.lin, -self.v, self.d)

    def norm_poly(self) -> tuple[Poly, Poly]:
        """(numerator, denominator) of self * conjugate as element of K(t)(X)."""
        n = self.u * (self.u - self.v * self.domain.lin) - self.v * self.v * self.domain.S
        return n, self.d * self.d

    def inverse(self) -> "CurveFn":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero curve function")
        conj = self.conjugate()
        n, _ = self.norm_poly()
        # 1/self = conj * d^2 / (norm numerator) -- denominators of conj fold in
        return CurveFn(self.domain, conj.u * self.d, conj.v * self.d, n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.domain.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        return (self - o).is_zero()

    def reduced(self) -> "CurveFn":
        """Cancel the full gcd of (u, v, d); costly, for deep compositions."""
        g = poly_gcd(poly_gcd(self.u, self.v), self.d)
        if g.is_constant():
            return self
        return CurveFn(self.domain, self.u.exact_div(g), self.v.exact_div(g), self.d.exact_div(g))

    def evaluate(self, x: RatFn, y: RatFn) -> RatFn:
        """Substitute concrete section coordinates for (X, Y)."""
        un = self.u(x)
        vn = self.v(x)
        dn = self.d(x)
        un = un if isinstance(un, RatFn) else RatFn.from_poly(un)
        vn = vn if isinstance(vn, RatFn) else RatFn.from_poly(vn)
        dn = dn if isinstance(dn, RatFn) else RatFn.from_poly(dn)
        if dn.is_zero():
            raise ZeroDivisionError("map undefined at this section")
        return (un + vn * y) / dn

    def __repr__(self):
        return f"(({self.u!r}) + ({self.v!r})*Y) / ({self.d!r})"


def curve_equation_value(domain: CurveField, t_val: RatFn, x_val: CurveFn, y_val: CurveFn, target: WModel) -> CurveFn:
    """Evaluate the defining polynomial of ``target`` on mapped coordinates.

    t_val is the base-parameter substitution; x_val, y_val live on the curve
    underlying ``domain``.  The result is zero iff the map lands on target.
    """
    a1, a2, a3, a4, a6 = (a(t_val) for a in target.coefficients())
    lhs = y_val * y_val + domain.const(a1) * x_val * y_val + domain.const(a3) * y_val
    rhs = ((x_val + domain.const(a2)) * x_val + domain.const(a4)) * x_val + domain.const(a6)
    return lhs - rhs
