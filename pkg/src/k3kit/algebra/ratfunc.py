"""Rational functions in one variable, stored reduced with a monic denominator.

A ``FunctionField`` doubles as a coefficient-field context, so polynomials
over K(k) (and hence symbolic-parameter computations) reuse the same code
paths as polynomials over Q or a radical tower.
"""
from __future__ import annotations

from fractions import Fraction

from .fields import QQ
from .poly import NEG_INF, Poly, poly_gcd


def _low_index(p: Poly) -> int:
    for i, c in enumerate(p.coeffs):
        if not (c == p.field.zero):
            return i
    return 0


class RatFn:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Poly.const(den.field, den.var, den.field.one)
        if reduce and not num.is_zero():
            nlow = _low_index(num)
            dlow = _low_index(den)
            shift = min(nlow, dlow)
            if shift:
                num = Poly(num.field, num.var, num.coeffs[shift:])
                den = Poly(den.field, den.var, den.coeffs[shift:])
            # a monomial on either side is fully handled by the shift
            if len([c for c in num.coeffs if not (c == num.field.zero)]) > 1 and not den.is_constant() and len(
                [c for c in den.coeffs if not (c == den.field.zero)]
            ) > 1:
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
        if reduce:
            lead = den.leading()
            if lead != den.field.one:
                from .poly import _invert

                inv = _invert(den.field, lead)
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFn":
        return cls(p, Poly.const(p.field, p.var, p.field.one), reduce=False)

    @classmethod
    def const(cls, field, var: str, value) -> "RatFn":
        return cls.from_poly(Poly.const(field, var, value))

    @property
    def field(self):
        return self.num.field

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError(f"{self} is not polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def _wrap(self, other) -> "RatFn | None":
        if isinstance(other, RatFn):
            if other.var == self.var and other.field == self.field:
                return other
            if self.field.is_element(other):
                return RatFn.const(self.field, self.var, self.field.coerce(other))
            return None
        if isinstance(other, Poly):
            if other.var == self.var and other.field == self.field:
                return RatFn.from_poly(other)
            if self.field.is_element(other):
                return RatFn.const(self.field, self.var, self.field.coerce(other))
            return None
        if self.field.is_element(other):
            return RatFn.const(self.field, self.var, self.field.coerce(other))
        return None

    def _promote(self, other) -> "RatFn | None":
        """When ``other`` lives in a strictly larger domain, compute there."""
        if isinstance(other, RatFn) and other.field.is_element(self):
            return other
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is not None:
            return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)
        big = self._promote(other)
        if big is not None:
            return big + self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is not None:
            return self + (-o)
        big = self._promote(other)
        if big is not None:
            return -(big - self)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is not None:
            return RatFn(self.num * o.num, self.den * o.den)
        big = self._promote(other)
        if big is not None:
            return big * self
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is not None:
            if o.is_zero():
                raise ZeroDivisionError("division by zero rational function")
            return RatFn(self.num * o.den, self.den * o.num)
        big = self._promote(other)
        if big is not None:
            return big._wrap(self) / big
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        one = RatFn.const(self.field, self.var, self.field.one)
        result, base = one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "RatFn":
        return 1 / self

    def __call__(self, x):
        """Evaluate; x may be a scalar, Poly or RatFn (composition)."""
        num = self.num(x)
        den = self.den(x)
        if isinstance(x, (Poly, RatFn)):
            fld, var = x.field, x.var

            def lift(v):
                if isinstance(v, RatFn):
                    return v
                if isinstance(v, Poly):
                    return RatFn.from_poly(v)
                return RatFn.const(fld, var, fld.coerce(v))

            return lift(num) / lift(den)
        if hasattr(den, "inverse"):
            return num * den.inverse()
        return num / den

    def valuation(self, place: Poly) -> int:
        """Order of vanishing at the irreducible place (negative at poles)."""
        if self.is_zero():
            raise ValueError("zero has infinite valuation")
        return self.num.valuation(place) - self.den.valuation(place)

    def valuation_at_infinity(self) -> int:
        """Order of vanishing at t = infinity: deg den - deg num."""
        if self.is_zero():
            raise ValueError("zero has infinite valuation")
        return self.den.degree - self.num.degree

    def derivative(self) -> "RatFn":
        return RatFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def map_coefficients(self, fn, field=None, var=None) -> "RatFn":
        return RatFn(
            self.num.map_coefficients(fn, field=field, var=var),
            self.den.map_coefficients(fn, field=field, var=var),
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFn):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly) or self.field.is_element(other):
            return self.den.is_constant() and self.num == self.den.constant_value() * self._wrap(other).num
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .printer import format_ratfn

        return format_ratfn(self)


class FunctionField:
    """K(var) as a coefficient-field context (elements are RatFn)."""

    def __init__(self, base, var: str):
        self.base = base
        self.var = var
        self._zero = RatFn.const(base, var, base.zero)
        self._one = RatFn.const(base, var, base.one)

    @property
    def zero(self) -> RatFn:
        return self._zero

    @property
    def one(self) -> RatFn:
        return self._one

    def gen(self) -> RatFn:
        return RatFn.from_poly(Poly.gen(self.base, self.var))

    def from_fraction(self, q) -> RatFn:
        return RatFn.const(self.base, self.var, self.base.from_fraction(q))

    def coerce(self, x) -> RatFn:
        if isinstance(x, RatFn):
            if x.field == self.base and x.var == self.var:
                return x
            if self.base.is_element(x):
                return RatFn.const(self.base, self.var, self.base.coerce(x))
            if x.var == self.var:
                return x.map_coefficients(self.base.coerce, field=self.base)
            if x.is_constant():
                return RatFn.const(self.base, self.var, self.base.coerce(x.constant_value()))
            raise TypeError(f"cannot coerce {x!r} into {self}")
        if isinstance(x, Poly):
            if x.field == self.base and x.var == self.var:
                return RatFn.from_poly(x)
            if self.base.is_element(x):
                return RatFn.const(self.base, self.var, self.base.coerce(x))
            if x.var == self.var:
                return RatFn.from_poly(x.map_coefficients(self.base.coerce, field=self.base))
            if x.is_constant():
                return self.coerce(x.constant_value()) if x.coeffs else self._zero
            raise TypeError(f"cannot coerce {x!r} into {self}")
        if self.base.is_element(x):
            return RatFn.const(self.base, self.var, self.base.coerce(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def is_element(self, x) -> bool:
        if isinstance(x, RatFn):
            return (x.field == self.base and x.var == self.var) or self.base.is_element(x)
        if isinstance(x, Poly):
            return (x.field == self.base and x.var == self.var) or self.base.is_element(x)
        return self.base.is_element(x)

    def adjoin_sqrt(self, d: int) -> "FunctionField":
        new_base = self.base.adjoin_sqrt(d)
        if new_base == self.base:
            return self
        return FunctionField(new_base, self.var)

    def to_rational(self, x) -> Fraction:
        e = self.coerce(x)
        if not e.is_constant():
            raise ValueError(f"{e} is not rational")
        return self.base.to_rational(e.constant_value())

    def sqrt_of(self, d: int):
        v = self.base.sqrt_of(d)
        return None if v is None else RatFn.const(self.base, self.var, v)

    def lift(self, x) -> RatFn:
        """Embed an element of (an extension-compatible) smaller field."""
        if isinstance(x, RatFn):
            return x.map_coefficients(self.base.coerce, field=self.base)
        return self.coerce(x)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FunctionField)
            and self.base == other.base
            and self.var == other.var
        )

    def __hash__(self) -> int:
        return hash(("FunctionField", self.base, self.var))

    def __repr__(self) -> str:
        return f"{self.base}({self.var})"


def ratfn(field, var: str, num, den=None) -> RatFn:
    """Convenience constructor from polynomial coefficient lists or values."""
    n = num if isinstance(num, Poly) else Poly(field, var, num)
    if den is None:
        return RatFn.from_poly(n)
    d = den if isinstance(den, Poly) else Poly(field, var, den)
    return RatFn(n, d)
