"""Sections of an elliptic fibration and the exact chord-tangent group law."""
from __future__ import annotations

from ..algebra.ratfunc import FunctionField, RatFn
from .model import WModel


class SectionPt:
    """A section (x(t), y(t)); ``field_disc`` tags its field of definition.

    field_disc is the squarefree d with coordinates in Q(sqrt(d))(t)
    (d = 1 for rational sections); purely informative for the L-series sums.
    """

    __slots__ = ("x", "y", "infinity", "field_disc", "name")

    def __init__(self, x=None, y=None, infinity: bool = False, field_disc: int = 1, name: str = ""):
        self.x = x
        self.y = y
        self.infinity = infinity
        self.field_disc = field_disc
        self.name = name

    @classmethod
    def zero(cls) -> "SectionPt":
        return cls(infinity=True)

    def is_zero(self) -> bool:
        return self.infinity

    def __eq__(self, other) -> bool:
        if not isinstance(other, SectionPt):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity == other.infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash("O") if self.infinity else hash((self.x, self.y))

    def __repr__(self) -> str:
        if self.infinity:
            return "O"
        label = f"{self.name}=" if self.name else ""
        return f"{label}({self.x!r}, {self.y!r})"


def section_from_strings(field, var: str, x_src: str, y_src: str, symbols=None, field_disc: int = 1, name: str = "") -> SectionPt:
    from ..algebra.parser import parse_ratfn

    x = parse_ratfn(x_src, variable=var, field=field, symbols=symbols)
    y = parse_ratfn(y_src, variable=var, field=field, symbols=symbols)
    return SectionPt(x, y, field_disc=field_disc, name=name)


def on_curve(model: WModel, P: SectionPt) -> bool:
    """Exact substitution check of the model equation."""
    if P.is_zero():
        return True
    ctx = FunctionField(model.field, model.var)
    x, y = ctx.coerce(P.x), ctx.coerce(P.y)
    lhs = y * y + model.a1 * x * y + model.a3 * y
    rhs = ((x + model.a2) * x + model.a4) * x + model.a6
    return lhs == rhs


def negate(model: WModel, P: SectionPt) -> SectionPt:
    if P.is_zero():
        return P
    return SectionPt(P.x, -P.y - model.a1 * P.x - model.a3, field_disc=P.field_disc)


def add(model: WModel, P: SectionPt, Q: SectionPt) -> SectionPt:
    """Group law over the function field (long Weierstrass form)."""
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    ctx = FunctionField(model.field, model.var)
    x1, y1 = ctx.coerce(P.x), ctx.coerce(P.y)
    x2, y2 = ctx.coerce(Q.x), ctx.coerce(Q.y)
    a1, a2, a3, a4, a6 = model.coefficients()
    if x1 == x2:
        if (y2 + y1 + a1 * x1 + a3).is_zero():
            return SectionPt.zero()
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return SectionPt(x3, y3)


def multiply(model: WModel, n: int, P: SectionPt) -> SectionPt:
    if n < 0:
        return multiply(model, -n, negate(model, P))
    result = SectionPt.zero()
    addend = P
    while n:
        if n & 1:
            result = add(model, result, addend)
        addend = add(model, addend, addend)
        n >>= 1
    return result


def subtract(model: WModel, P: SectionPt, Q: SectionPt) -> SectionPt:
    return add(model, P, negate(model, Q))


def torsion_check(model: WModel, P: SectionPt, n: int) -> bool:
    """True iff nP = O under the exact group law (P must lie on the model)."""
    if not on_curve(model, P):
        raise ValueError("point is not on the model")
    return multiply(model, n, P).is_zero()


def torsion_order(model: WModel, P: SectionPt, bound: int = 12) -> int | None:
    """Exact order of P if at most bound, else None."""
    if not on_curve(model, P):
        raise ValueError("point is not on the model")
    acc = SectionPt.zero()
    for k in range(1, bound + 1):
        acc = add(model, acc, P)
        if acc.is_zero():
            return k
    return None
