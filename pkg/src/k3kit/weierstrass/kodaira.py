"""Kodaira fiber classification for elliptic surfaces over P^1 (char 0).

In residue characteristic zero Tate's algorithm collapses to a lookup on
the valuations (v(c4), v(c6), v(Delta)) of a locally minimal model:

    v(D)=0                smooth
    v(c4)=0               I_n,   n = v(D)
    v(D)=2                II
    v(D)=3                III
    v(D)=4                IV
    v(D)=6                I_0*
    v(D)=6+n, v(c4)=2     I_n*   (n >= 1)
    v(D)=8                IV*
    v(D)=9                III*
    v(D)=10               II*
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import inf

from ..algebra.factor import factor_over_field
from ..algebra.poly import Poly, poly_gcd, poly_xgcd
from ..algebra.ratfunc import FunctionField, RatFn
from .model import WModel


class Place:
    """A closed point of P^1: a monic irreducible polynomial, or infinity."""

    __slots__ = ("poly", "infinite")

    def __init__(self, poly: Poly | None, infinite: bool = False):
        if infinite:
            self.poly = None
        else:
            if poly is None or poly.is_constant():
                raise ValueError("finite place needs a nonconstant polynomial")
            self.poly = poly.monic()
        self.infinite = infinite

    @classmethod
    def at_infinity(cls) -> "Place":
        return cls(None, infinite=True)

    @classmethod
    def at_root(cls, field, var: str, value) -> "Place":
        gen = Poly.gen(field, var)
        return cls(gen - field.coerce(value))

    @property
    def degree(self) -> int:
        return 1 if self.infinite else self.poly.degree

    def __eq__(self, other) -> bool:
        if not isinstance(other, Place):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite == other.infinite
        return self.poly == other.poly

    def __hash__(self) -> int:
        return hash("inf") if self.infinite else hash(self.poly)

    def __repr__(self) -> str:
        if self.infinite:
            return "inf"
        from ..algebra.printer import format_poly

        if self.poly.degree == 1 and self.poly.coeffs[1] == self.poly.field.one:
            root = -self.poly.coeffs[0]
            from ..algebra.printer import format_scalar

            return format_scalar(root)
        return format_poly(self.poly)


_TYPE_RE = re.compile(r"^(I|II|III|IV)(\d*)(\*?)$")


@dataclass(frozen=True)
class KodairaType:
    """One of I_n, I_n*, II, III, IV, IV*, III*, II*."""

    kind: str  # "I", "I*", "II", "III", "IV", "II*", "III*", "IV*"
    n: int = 0  # meaningful for I / I*

    @classmethod
    def parse(cls, s: str) -> "KodairaType":
        s = s.strip().replace("_", "")
        m = _TYPE_RE.match(s)
        if not m:
            raise ValueError(f"unrecognized Kodaira type {s!r}")
        base, digits, star = m.groups()
        if base == "I" and digits:
            return cls("I*" if star else "I", int(digits))
        return cls(base + star, 0)

    @property
    def euler(self) -> int:
        if self.kind == "I":
            return self.n
        if self.kind == "I*":
            return self.n + 6
        return {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[self.kind]

    @property
    def component_count(self) -> int:
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return self.n + 5
        return {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}[self.kind]

    @property
    def component_group(self) -> tuple[int, ...]:
        """Cyclic invariant factors of the component group."""
        if self.kind == "I":
            return (self.n,) if self.n > 1 else ()
        if self.kind == "I*":
            return (2, 2) if self.n % 2 == 0 else (4,)
        return {"II": (), "III": (2,), "IV": (3,), "IV*": (3,), "III*": (2,), "II*": ()}[self.kind]

    @property
    def root_lattice_det(self) -> int:
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return 4
        return {"II": 1, "III": 2, "IV": 3, "IV*": 3, "III*": 2, "II*": 1}[self.kind]

    def is_multiplicative(self) -> bool:
        return self.kind == "I" and self.n >= 1

    def __str__(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind


class ResidueRing:
    """K[t]/(q) for q irreducible over K; a number-field-like residue field."""

    def __init__(self, place_poly: Poly):
        self.modulus = place_poly.monic()
        self.field = place_poly.field
        self.var = place_poly.var

    def reduce_poly(self, p: Poly) -> Poly:
        return p % self.modulus

    def reduce(self, r: RatFn) -> Poly:
        """Reduce a rational function with nonnegative valuation."""
        num = r.num % self.modulus
        g, u, _ = poly_xgcd(r.den, self.modulus)
        if not g.is_constant():
            raise ZeroDivisionError(f"{r} has a pole at {self.modulus}")
        return (num * u) % self.modulus

    def inv(self, a: Poly) -> Poly:
        g, u, _ = poly_xgcd(a, self.modulus)
        if not g.is_constant():
            raise ZeroDivisionError(f"{a} not invertible mod {self.modulus}")
        return u % self.modulus

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b) % self.modulus

    def is_zero(self, a: Poly) -> bool:
        return (a % self.modulus).is_zero()

    def is_square(self, a: Poly) -> bool | None:
        """Squareness in the residue field; None when undecidable cheaply.

        Only used for bookkeeping (split/nonsplit decisions happen mod p in
        the counting module), so a None is acceptable for callers here.
        """
        if self.modulus.degree == 1:
            from ..algebra.fields import QQ, Tower, fraction_sqrt

            val = a % self.modulus
            c = val.constant_value() if not val.is_zero() else self.field.zero
            if self.field == QQ:
                return fraction_sqrt(self.field.coerce(c)) is not None
        return None


@dataclass
class FiberData:
    place: Place
    kodaira: KodairaType
    vc4: float
    vc6: float
    vdelta: int
    scale_exponent: int = 0
    singular_point: tuple | None = None  # residues (x0, y0) on the minimal model
    cone_disc: object | None = None  # tangent-cone discriminant class at a node

    @property
    def euler(self) -> int:
        return self.kodaira.euler

    @property
    def component_count(self) -> int:
        return self.kodaira.component_count

    @property
    def component_group(self) -> tuple[int, ...]:
        return self.kodaira.component_group

    @property
    def degree(self) -> int:
        return self.place.degree

    def __repr__(self) -> str:
        mult = "" if self.degree == 1 else f"{self.degree}"
        return f"{mult}{self.kodaira}({self.place})"


class FiberConfig:
    """All singular fibers of one fibration, infinity included."""

    def __init__(self, fibers: list[FiberData]):
        self.fibers = fibers

    def __iter__(self):
        return iter(self.fibers)

    def __len__(self) -> int:
        return len(self.fibers)

    @property
    def euler_sum(self) -> int:
        return sum(f.euler * f.degree for f in self.fibers)

    def at(self, place: Place) -> FiberData | None:
        for f in self.fibers:
            if f.place == place:
                return f
        return None

    def root_lattice_det_product(self) -> int:
        prod = 1
        for f in self.fibers:
            prod *= f.kodaira.root_lattice_det ** f.degree
        return prod

    def signature(self) -> list[tuple[str, str, int]]:
        return sorted(
            ((str(f.kodaira), repr(f.place), f.degree) for f in self.fibers),
            key=lambda x: (x[0], x[1]),
        )

    def notation(self) -> str:
        """Human-readable list in the source's mI_n(p(t)) convention."""
        groups: dict[str, list[FiberData]] = {}
        for f in self.fibers:
            groups.setdefault(str(f.kodaira), []).append(f)

        def sort_key(item):
            return item[0]

        parts = []
        for tname, fs in sorted(groups.items(), key=sort_key):
            count = sum(f.degree for f in fs)
            places = ",".join(repr(f.place) for f in fs)
            prefix = f"{count}" if count > 1 else ""
            parts.append(f"{prefix}{tname}({places})")
        return ", ".join(parts)

    def __repr__(self) -> str:
        return f"<fibers: {self.notation()}>"


def classify_triple(vc4, vc6, vd: int) -> KodairaType:
    """Minimal-valuation triple to Kodaira type (residue characteristic 0)."""
    if vd == 0:
        raise ValueError("smooth fiber")
    if vc4 == 0:
        return KodairaType("I", vd)
    if vd == 2:
        return KodairaType("II")
    if vd == 3:
        return KodairaType("III")
    if vd == 4:
        return KodairaType("IV")
    if vd == 6:
        return KodairaType("I*", 0)
    if vd >= 7 and vc4 == 2:
        return KodairaType("I*", vd - 6)
    if vd == 8:
        return KodairaType("IV*")
    if vd == 9:
        return KodairaType("III*")
    if vd == 10:
        return KodairaType("II*")
    raise ValueError(f"triple (v(c4), v(c6), v(D)) = ({vc4}, {vc6}, {vd}) is not minimal")


def _valuations(model: WModel, q: Poly):
    vd = model.disc.valuation(q)
    vc4 = inf if model.c4.is_zero() else model.c4.valuation(q)
    vc6 = inf if model.c6.is_zero() else model.c6.valuation(q)
    return vc4, vc6, vd


def minimalize_at(model: WModel, place: Place) -> tuple[WModel, RatFn]:
    """Locally minimal model at one place; returns (model, scaling u)."""
    ctx = FunctionField(model.field, model.var)
    if place.infinite:
        chart, u = infinity_chart(model)
        return chart, u
    if not model.is_integral():
        model, u0 = model.integral_model()
    else:
        u0 = ctx.one
    q = place.poly
    vc4, vc6, vd = _valuations(model, q)
    k = min(vd // 12, int(vc4 // 4) if vc4 != inf else vd, int(vc6 // 6) if vc6 != inf else vd)
    k = max(k, 0)
    if k:
        u = RatFn.from_poly(q) ** k
        return model.transform(u=u), u0 * u
    return model, u0


def infinity_chart(model: WModel, chart_var: str = "s") -> tuple[WModel, RatFn]:
    """Locally minimal model around t = infinity in the chart t = 1/s.

    For a K3-normalized model (deg a_i <= 2i) the scaling is the usual
    (x, y) -> (x/s^4, y/s^6); the returned u records whatever was applied.
    """
    if not model.is_integral():
        model = model.integral_model()[0]
    ctx = FunctionField(model.field, chart_var)
    s = ctx.gen()
    sq = Poly.gen(model.field, chart_var)
    flipped = model.substitute_parameter(1 / s, new_var=chart_var, name=model.name)
    e = 0
    for i, a in zip((1, 2, 3, 4, 6), flipped.coefficients()):
        if not a.is_zero():
            v = a.valuation(sq)
            if v < 0:
                e = max(e, (-v + i - 1) // i)
    u = s ** -e if e else ctx.one
    scaled = flipped.transform(u=u) if e else flipped
    vc4, vc6, vd = _valuations(scaled, sq)
    k = min(vd // 12, int(vc4 // 4) if vc4 != inf else vd, int(vc6 // 6) if vc6 != inf else vd)
    if k > 0:
        u2 = RatFn.from_poly(sq) ** k
        scaled = scaled.transform(u=u2)
        u = u * u2
    return scaled, u


def _singular_point(model: WModel, ring: ResidueRing):
    """Singular point (x0, y0) of the reduced fiber, plus node data.

    Returns (x0, y0, cone_disc, is_cusp); cone_disc is the residue class whose
    squareness separates split from nonsplit multiplicative reduction.
    """
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    b2 = ring.reduce(model.b2)
    b4 = ring.reduce(model.b4)
    b6 = ring.reduce(model.b6)
    fld, var = ring.field, ring.var
    # f(x) = x^3 + (b2/4) x^2 + (b4/2) x + b6/4 over the residue field
    Rx = "~x"
    fpoly = Poly(
        ResidueField(ring), Rx,
        [ResidueElem(ring, ring.mul(b6, Poly.const(fld, var, quarter))),
         ResidueElem(ring, ring.mul(b4, Poly.const(fld, var, half))),
         ResidueElem(ring, ring.mul(b2, Poly.const(fld, var, quarter))),
         ResidueElem(ring, Poly.const(fld, var, fld.one))],
    )
    g = poly_gcd(fpoly, fpoly.derivative())
    if g.is_constant():
        return None
    if g.degree == 1:
        x0 = -g.coeffs[0].value
        # remaining root x1 from f = (x - x0)^2 (x - x1): sum of roots = -b2/4
        s = ring.reduce_poly(Poly.const(fld, var, Fraction(-1, 4)) * ring.reduce(model.b2))
        x1 = ring.reduce_poly(s - 2 * x0)
        cone = ring.reduce_poly(x0 - x1)
        is_cusp = ring.is_zero(cone)
    else:
        # g = (x - x0)^2: triple root, cusp
        x0 = ring.reduce_poly(g.coeffs[1].value * Poly.const(fld, var, Fraction(-1, 2)))
        cone = Poly.const(fld, var, fld.zero)
        is_cusp = True
    a1 = ring.reduce(model.a1)
    a3 = ring.reduce(model.a3)
    y0 = ring.reduce_poly((a1 * x0 + a3) * Poly.const(fld, var, Fraction(-1, 2)))
    return x0, y0, cone, is_cusp


class ResidueField:
    """Field-protocol wrapper so Poly can run over a residue ring."""

    def __init__(self, ring: ResidueRing):
        self.ring = ring

    @property
    def zero(self):
        return ResidueElem(self.ring, Poly.const(self.ring.field, self.ring.var, self.ring.field.zero))

    @property
    def one(self):
        return ResidueElem(self.ring, Poly.const(self.ring.field, self.ring.var, self.ring.field.one))

    def from_fraction(self, q):
        return ResidueElem(self.ring, Poly.const(self.ring.field, self.ring.var, self.ring.field.from_fraction(q)))

    def coerce(self, x):
        if isinstance(x, ResidueElem):
            if x.ring.modulus == self.ring.modulus:
                return x
            raise TypeError("residue ring mismatch")
        if isinstance(x, Poly):
            return ResidueElem(self.ring, x % self.ring.modulus)
        if self.ring.field.is_element(x):
            return ResidueElem(
                self.ring, Poly.const(self.ring.field, self.ring.var, self.ring.field.coerce(x))
            )
        raise TypeError(f"cannot coerce {x!r}")

    def is_element(self, x):
        return isinstance(x, ResidueElem) or isinstance(x, Poly) or self.ring.field.is_element(x)

    def __eq__(self, other):
        return isinstance(other, ResidueField) and other.ring.modulus == self.ring.modulus

    def __hash__(self):
        return hash(("ResidueField", self.ring.modulus))


class ResidueElem:
    __slots__ = ("ring", "value")

    def __init__(self, ring: ResidueRing, value: Poly):
        self.ring = ring
        self.value = value % ring.modulus

    def _wrap(self, other):
        if isinstance(other, ResidueElem):
            return other
        if isinstance(other, Poly) and other.var == self.ring.var:
            return ResidueElem(self.ring, other)
        return ResidueElem(
            self.ring,
            Poly.const(self.ring.field, self.ring.var, self.ring.field.coerce(other)),
        )

    def __add__(self, other):
        return ResidueElem(self.ring, self.value + self._wrap(other).value)

    __radd__ = __add__

    def __neg__(self):
        return ResidueElem(self.ring, -self.value)

    def __sub__(self, other):
        return ResidueElem(self.ring, self.value - self._wrap(other).value)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return ResidueElem(self.ring, self.ring.mul(self.value, self._wrap(other).value))

    __rmul__ = __mul__

    def inverse(self):
        return ResidueElem(self.ring, self.ring.inv(self.value))

    def __truediv__(self, other):
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.inverse()

    def __pow__(self, n):
        out = ResidueElem(self.ring, Poly.const(self.ring.field, self.ring.var, self.ring.field.one))
        base = self
        if n < 0:
            base = self.inverse()
            n = -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return self.value.is_zero()

    def __eq__(self, other):
        if isinstance(other, ResidueElem):
            return self.value == other.value
        try:
            return self.value == self._wrap(other).value
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"[{self.value!r}]"


def kodaira_type_at(model: WModel, place: Place) -> FiberData:
    """Fiber type at one place (the model is minimalized locally first)."""
    if place.infinite:
        chart, _ = infinity_chart(model)
        fld = model.field
        s_place = Place(Poly.gen(fld, chart.var))
        data = kodaira_type_at(chart, s_place)
        return FiberData(
            place=Place.at_infinity(),
            kodaira=data.kodaira,
            vc4=data.vc4,
            vc6=data.vc6,
            vdelta=data.vdelta,
            scale_exponent=data.scale_exponent,
            singular_point=data.singular_point,
            cone_disc=data.cone_disc,
        )
    local, _ = minimalize_at(model, place)
    q = place.poly
    vc4, vc6, vd = _valuations(local, q)
    if vd == 0:
        raise ValueError(f"fiber at {place} is smooth")
    ktype = classify_triple(vc4, vc6, vd)
    ring = ResidueRing(q)
    sing = _singular_point(local, ring)
    x0 = y0 = cone = None
    if sing is not None:
        x0, y0, cone, _ = sing
    return FiberData(
        place=place,
        kodaira=ktype,
        vc4=vc4,
        vc6=vc6,
        vdelta=vd,
        scale_exponent=0,
        singular_point=(x0, y0) if x0 is not None else None,
        cone_disc=cone,
    )


def analyze_fibers(model: WModel, expect_euler: int | None = 24) -> FiberConfig:
    """All bad fibers, infinity included; hard error unless Euler sum matches."""
    work = model if model.is_integral() else model.integral_model()[0]
    disc = work.disc.as_poly()
    _, facs = factor_over_field(disc)
    fibers = []
    for q, _mult in facs:
        fibers.append(kodaira_type_at(work, Place(q)))
    chart, _ = infinity_chart(work)
    s_poly = Poly.gen(model.field, chart.var)
    if not chart.disc.as_poly().valuation(s_poly) == 0:
        data = kodaira_type_at(chart, Place(s_poly))
        fibers.append(
            FiberData(
                place=Place.at_infinity(),
                kodaira=data.kodaira,
                vc4=data.vc4,
                vc6=data.vc6,
                vdelta=data.vdelta,
                singular_point=data.singular_point,
                cone_disc=data.cone_disc,
            )
        )
    config = FiberConfig(fibers)
    if expect_euler is not None and config.euler_sum != expect_euler:
        raise ArithmeticError(
            f"Euler numbers sum to {config.euler_sum}, expected {expect_euler}: "
            f"{config.notation()} (model {model.name or work.equation_str()})"
        )
    return config
