"""Dense univariate polynomials over any of the exact coefficient fields."""
from __future__ import annotations

from fractions import Fraction


class _NegInfinity:
    """Degree of the zero polynomial: a sentinel below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return self is not other

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return self is other

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return hash("NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("cannot negate -infinity degree")

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInfinity()


class Poly:
    """Immutable dense polynomial; trailing zero coefficients are stripped."""

    __slots__ = ("field", "var", "coeffs")

    def __init__(self, field, var: str, coeffs):
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.field = field
        self.var = var
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, var: str, value) -> "Poly":
        return cls(field, var, [field.coerce(value)])

    @classmethod
    def gen(cls, field, var: str) -> "Poly":
        return cls(field, var, [field.zero, field.one])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else self.field.zero

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _check(self, other: "Poly"):
        if self.var != other.var or self.field != other.field:
            raise TypeError(
                f"polynomial mismatch: {self.field}[{self.var}] vs {other.field}[{other.var}]"
            )

    def _wrap(self, other) -> "Poly | None":
        if isinstance(other, Poly) and other.var == self.var and other.field == self.field:
            return other
        if self.field.is_element(other):
            return Poly.const(self.field, self.var, self.field.coerce(other))
        return None

    def _promote(self, other):
        from .ratfunc import RatFn

        if isinstance(other, (Poly, RatFn)) and other.field.is_element(self):
            return other
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            big = self._promote(other)
            if big is not None:
                return big + self
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(
            self.field,
            self.var,
            [self.coeff(i) + o.coeff(i) for i in range(n)],
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, self.var, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            big = self._promote(other)
            if big is not None:
                return -(big - self)
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly) and self.field.is_element(other):
            c = self.field.coerce(other)
            return Poly(self.field, self.var, [a * c for a in self.coeffs])
        o = self._wrap(other)
        if o is None:
            big = self._promote(other)
            if big is not None:
                return big * self
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Poly(self.field, self.var, [])
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == self.field.zero:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, self.var, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(self.field, self.var, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        o = self._wrap(other)
        if o is None:
            raise TypeError(f"cannot divide {self!r} by {other!r}")
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead_inv = _invert(self.field, o.leading())
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly(self.field, self.var, []), self
        quo = [self.field.zero] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(o.coeffs) - 1] * lead_inv
            quo[k] = c
            if c != self.field.zero:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(self.field, self.var, quo), Poly(self.field, self.var, rem)

    def __floordiv__(self, other):
        return self.divmod(self._wrap(other))[0]

    def __mod__(self, other):
        return self.divmod(self._wrap(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = _invert(self.field, self.leading())
        return Poly(self.field, self.var, [c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly(
            self.field,
            self.var,
            [self.coeffs[i] * i for i in range(1, len(self.coeffs))],
        )

    def __call__(self, x):
        """Horner evaluation; x may be any value with compatible arithmetic."""
        if not self.coeffs:
            if isinstance(x, Poly):
                return Poly(x.field, x.var, [])
            return self.field.zero
        acc = self.coeffs[-1]
        if isinstance(x, Poly):
            acc = Poly.const(x.field, x.var, x.field.coerce(acc))
            for c in reversed(self.coeffs[:-1]):
                acc = acc * x + x.field.coerce(c)
            return acc
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "Poly":
        """Multiply by var**k."""
        if self.is_zero():
            return self
        return Poly(self.field, self.var, (self.field.zero,) * k + self.coeffs)

    def reverse(self, n: int | None = None) -> "Poly":
        """Coefficient reversal x**n * p(1/x); n defaults to deg p."""
        if self.is_zero():
            return self
        if n is None:
            n = len(self.coeffs) - 1
        if n < len(self.coeffs) - 1:
            raise ValueError("reversal order below degree")
        cs = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return Poly(self.field, self.var, list(reversed(cs)))

    def map_coefficients(self, fn, field=None, var=None) -> "Poly":
        return Poly(field or self.field, var or self.var, [fn(c) for c in self.coeffs])

    def valuation(self, place: "Poly") -> int:
        """Multiplicity of the irreducible place polynomial in self."""
        if self.is_zero():
            raise ValueError("zero polynomial has infinite valuation")
        v, p = 0, self
        while True:
            q, r = p.divmod(place)
            if not r.is_zero():
                return v
            v, p = v + 1, q

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return (
                self.field == other.field
                and self.var == other.var
                and self.coeffs == other.coeffs
            )
        if self.field.is_element(other):
            o = self.field.coerce(other)
            if o == self.field.zero:
                return self.is_zero()
            return self.is_constant() and self.coeffs and self.coeffs[0] == o
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.var, self.coeffs))

    def __repr__(self) -> str:
        from .printer import format_poly

        return format_poly(self)


def _invert(field, c):
    if isinstance(c, Fraction):
        return 1 / c
    if hasattr(c, "inverse"):
        return c.inverse()
    return field.one / c


def _rational_components(c):
    from .fields import TowerElem

    if isinstance(c, TowerElem):
        return c.coeffs
    return (Fraction(c),)


def _content(p: Poly) -> Fraction:
    """Positive rational content across all coefficient components."""
    from math import gcd, lcm

    num, den = 0, 1
    for c in p.coeffs:
        for q in _rational_components(c):
            if q:
                num = gcd(num, q.numerator)
                den = lcm(den, q.denominator)
    return Fraction(num, den) if num else Fraction(1)


def _primitive(p: Poly) -> Poly:
    c = _content(p)
    if c == 1:
        return p
    inv = 1 / c
    return Poly(p.field, p.var, [x * inv for x in p.coeffs])


def _pseudo_rem(a: Poly, b: Poly) -> Poly:
    """Fraction-free remainder: lc(b)^k * a mod b without coefficient division."""
    l = b.leading()
    r = a
    db = b.degree
    while not r.is_zero() and r.degree >= db:
        shift = r.degree - db
        r = r * l - b.shift(shift) * r.leading()
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; primitive pseudo-remainder sequence over Q and towers.

    Plain monic Euclid makes coefficient heights explode over radical
    towers; the primitive PRS keeps them polynomially bounded.
    """
    from .fields import RationalField, Tower

    if isinstance(a.field, (RationalField, Tower)):
        if a.is_zero():
            return b.monic()
        if b.is_zero():
            return a.monic()
        a, b = _primitive(a), _primitive(b)
        while not b.is_zero():
            r = _pseudo_rem(a, b)
            a, b = b, (_primitive(r) if not r.is_zero() else r)
        return a.monic()
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    field, var = a.field, a.var
    zero = Poly(field, var, [])
    one = Poly.const(field, var, field.one)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = _invert(field, r0.leading())
    return r0.monic(), s0 * inv, t0 * inv


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: return [(g_i, i)] with p = lc * prod g_i^i, g_i monic squarefree."""
    p = p.monic()
    out: list[tuple[Poly, int]] = []
    g = poly_gcd(p, p.derivative())
    if g.is_constant():
        return [(p, 1)]
    w = p.exact_div(g)
    i = 1
    while not w.is_constant():
        y = poly_gcd(w, g)
        f = w.exact_div(y)
        if not f.is_constant():
            out.append((f.monic(), i))
        w, g = y, g.exact_div(y)
        i += 1
    return out
