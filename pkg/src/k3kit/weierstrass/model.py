"""Weierstrass models over K(t) and their standard invariants."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from ..algebra.fields import QQ, common_field
from ..algebra.poly import Poly, NEG_INF
from ..algebra.ratfunc import FunctionField, RatFn


class WModel:
    """Long Weierstrass model y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.

    Coefficients are rational functions in one parameter over an exact
    field (Q, a radical tower, or Q(k) for a symbolic parameter).
    """

    def __init__(self, field, var: str, a1, a2, a3, a4, a6, name: str = ""):
        ctx = FunctionField(field, var)
        self.field = field
        self.var = var
        self.a1 = ctx.coerce(a1)
        self.a2 = ctx.coerce(a2)
        self.a3 = ctx.coerce(a3)
        self.a4 = ctx.coerce(a4)
        self.a6 = ctx.coerce(a6)
        self.name = name
        if self.disc.is_zero():
            raise ValueError(f"model {name or self.coefficients()} has zero discriminant")

    @classmethod
    def short(cls, field, var: str, a2, a4, a6, name: str = "") -> "WModel":
        zero = FunctionField(field, var).zero
        return cls(field, var, zero, a2, zero, a4, a6, name=name)

    def coefficients(self) -> tuple[RatFn, RatFn, RatFn, RatFn, RatFn]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b2(self) -> RatFn:
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self) -> RatFn:
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self) -> RatFn:
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self) -> RatFn:
        return (
            self.a1 * self.a1 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3 * self.a3
            - self.a4 * self.a4
        )

    @cached_property
    def c4(self) -> RatFn:
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self) -> RatFn:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def disc(self) -> RatFn:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def j(self) -> RatFn:
        return self.c4 ** 3 / self.disc

    def invariants(self):
        """(b2, b4, b6, b8, c4, c6, disc, j)."""
        return (self.b2, self.b4, self.b6, self.b8, self.c4, self.c6, self.disc, self.j)

    def rhs(self, x: RatFn) -> RatFn:
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def transform(self, u=1, r=0, s=0, w=0, name: str = "") -> "WModel":
        """Admissible change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + w."""
        ctx = FunctionField(self.field, self.var)
        u, r, s, w = (ctx.coerce(v) for v in (u, r, s, w))
        if u.is_zero():
            raise ValueError("u must be nonzero")
        a1, a2, a3, a4, a6 = self.coefficients()
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        na3 = (a3 + r * a1 + 2 * w) / u ** 3
        na4 = (a4 - s * a3 + 2 * r * a2 - (w + r * s) * a1 + 3 * r * r - 2 * s * w) / u ** 4
        na6 = (a6 + r * a4 + r * r * a2 + r ** 3 - w * a3 - w * w - r * w * a1) / u ** 6
        return WModel(self.field, self.var, na1, na2, na3, na4, na6, name=name or self.name)

    def complete_square(self) -> "WModel":
        """Equivalent model with a1 = a3 = 0 (char 0)."""
        half = Fraction(1, 2)
        return self.transform(s=-self.a1 * half, w=-self.a3 * half)

    def substitute_parameter(self, phi: RatFn, new_var: str | None = None, name: str = "") -> "WModel":
        """Replace the base parameter t by phi(new parameter)."""
        nv = new_var or phi.var
        coeffs = [a(phi) for a in self.coefficients()]
        return WModel(self.field, nv, *coeffs, name=name)

    def integral_model(self) -> tuple["WModel", RatFn]:
        """Clear denominators by admissible scalings; returns (model, u used).

        Afterwards every a_i is polynomial, and at each finite place the
        triple (v(c4), v(c6), v(Delta)) is minimal.
        """
        from ..algebra.factor import factor_over_field

        ctx = FunctionField(self.field, self.var)
        den = Poly.const(self.field, self.var, self.field.one)
        for a in self.coefficients():
            if not a.is_zero():
                from ..algebra.poly import poly_gcd

                g = poly_gcd(den, a.den)
                den = den * a.den.exact_div(g)
        u_total = ctx.one
        model = self
        if not den.is_constant():
            _, facs = factor_over_field(den)
            u = ctx.one
            for q, _ in facs:
                e = 0
                for i, a in zip((1, 2, 3, 4, 6), model.coefficients()):
                    if a.is_zero():
                        continue
                    v = a.valuation(q)
                    if v < 0:
                        e = max(e, (-v + i - 1) // i)
                if e:
                    u = u * RatFn.from_poly(q) ** -e
            model = model.transform(u=u)
            u_total = u_total * u
        # per-place minimality: strip factors q^k with k = min(vc4/4, vc6/6, vD/12)
        disc = model.disc
        if not disc.is_poly():
            raise ArithmeticError("integral model still has non-polynomial discriminant")
        _, facs = factor_over_field(disc.as_poly())
        u = ctx.one
        for q, _ in facs:
            k = _min_scale(model, q)
            if k > 0:
                u = u * RatFn.from_poly(q) ** k
        if not (u == ctx.one):
            candidate = model.transform(u=u)
            if all(a.is_zero() or a.is_poly() for a in candidate.coefficients()):
                model = candidate
                u_total = u_total * u
            else:
                # fall back to the short model carrying the same invariants
                short = WModel(
                    model.field,
                    model.var,
                    ctx.zero,
                    ctx.zero,
                    ctx.zero,
                    -27 * model.c4,
                    -54 * model.c6,
                    name=model.name,
                ).transform(u=6 * u)
                if all(a.is_zero() or a.is_poly() for a in short.coefficients()):
                    model = short
                    u_total = u_total * 6 * u
        return model, u_total

    def is_integral(self) -> bool:
        return all(a.is_zero() or a.is_poly() for a in self.coefficients())

    def equation_str(self) -> str:
        from ..algebra.printer import format_ratfn

        def term(c, mono):
            return None if c.is_zero() else f"({format_ratfn(c)})*{mono}" if not (c == 1) else mono

        lhs = ["y^2"]
        for c, mono in ((self.a1, "x*y"), (self.a3, "y")):
            t = term(c, mono)
            if t:
                lhs.append(t)
        rhs = ["x^3"]
        for c, mono in ((self.a2, "x^2"), (self.a4, "x")):
            t = term(c, mono)
            if t:
                rhs.append(t)
        if not self.a6.is_zero():
            rhs.append(f"({format_ratfn(self.a6)})")
        return " + ".join(lhs) + " = " + " + ".join(rhs)

    def __repr__(self) -> str:
        label = self.name or "WModel"
        return f"<{label}: {self.equation_str()}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WModel):
            return NotImplemented
        return (
            self.field == other.field
            and self.var == other.var
            and self.coefficients() == other.coefficients()
        )

    def __hash__(self) -> int:
        return hash(self.coefficients())


def _val(r: RatFn, q: Poly):
    if r.is_zero():
        return None
    return r.valuation(q)


def _min_scale(model: WModel, q: Poly) -> int:
    """Largest k with (v(c4), v(c6), v(D)) >= k*(4, 6, 12) at the place q."""
    vd = model.disc.valuation(q)
    k = vd // 12
    vc4 = _val(model.c4, q)
    if vc4 is not None:
        k = min(k, vc4 // 4)
    vc6 = _val(model.c6, q)
    if vc6 is not None:
        k = min(k, vc6 // 6)
    return max(k, 0)


def model_from_strings(field, var: str, coeffs: dict, symbols=None, name: str = "") -> WModel:
    """Build a model from expression strings {"a1": ..., ...}; missing = 0."""
    from ..algebra.parser import parse_ratfn

    ctx = FunctionField(field, var)
    vals = {}
    for key in ("a1", "a2", "a3", "a4", "a6"):
        src = coeffs.get(key)
        vals[key] = ctx.zero if src in (None, "0") else parse_ratfn(src, variable=var, field=field, symbols=symbols)
    return WModel(field, var, vals["a1"], vals["a2"], vals["a3"], vals["a4"], vals["a6"], name=name)
