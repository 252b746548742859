"""Explicit 2- and 3-isogenies with kernel at the origin.

The 2-isogeny of y^2 = x^3 + a x^2 + b x with kernel (0,0) is

    Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X,
    (X, Y) = ((x^2 + a x + b)/x,  y (b - x^2)/x^2).

For y^2 + A x y + B y = x^3 with 3-torsion kernel (0,0) the quotient is

    y1^2 + (A x1 + 3B) y1 = x1^3 - 6AB x1 - B (A^3 + 9B),
    x1 = (x^3 + A B x + B^2)/x^2,

("the raw quotient"); putting a 3-torsion point of the quotient at the
origin yields the companion kernel-shaped model

    y^2 - 3A x y + (27B - A^3) y = x^3,

which is the quadratic twist of the raw quotient by -3 (the twisting scale
is u^2 = -1/3, so the x-coordinate of the composed map stays rational:
X = -3 x1 - A^2, while the Y-coordinate acquires sqrt(-3)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra.fields import QQ, Tower, common_field
from .algebra.poly import Poly
from .algebra.ratfunc import FunctionField, RatFn
from .weierstrass.curvefield import CurveField, CurveFn, curve_equation_value
from .weierstrass.model import WModel
from .weierstrass.points import SectionPt, add, multiply, on_curve, torsion_order
from .weierstrass.transform import semantic_model_equal


class KernelForm2:
    """y^2 = x^3 + a x^2 + b x with 2-torsion point (0, 0)."""

    def __init__(self, model: WModel):
        if not (model.a1.is_zero() and model.a3.is_zero() and model.a6.is_zero()):
            raise ValueError("model is not in y^2 = x^3 + a x^2 + b x form")
        if model.a4.is_zero():
            raise ValueError("b = 0: (0,0) is singular")
        self.model = model
        self.a = model.a2
        self.b = model.a4

    @classmethod
    def from_coeffs(cls, field, var: str, a, b, name: str = "") -> "KernelForm2":
        ctx = FunctionField(field, var)
        return cls(WModel(field, var, ctx.zero, a, ctx.zero, b, ctx.zero, name=name))


class KernelForm3:
    """y^2 + A x y + B y = x^3 with 3-torsion point (0, 0)."""

    def __init__(self, model: WModel):
        if not (model.a2.is_zero() and model.a4.is_zero() and model.a6.is_zero()):
            raise ValueError("model is not in y^2 + A x y + B y = x^3 form")
        if model.a3.is_zero():
            raise ValueError("B = 0: (0,0) is singular")
        self.model = model
        self.A = model.a1
        self.B = model.a3

    @classmethod
    def from_coeffs(cls, field, var: str, A, B, name: str = "") -> "KernelForm3":
        ctx = FunctionField(field, var)
        return cls(WModel(field, var, A, ctx.zero, B, ctx.zero, ctx.zero, name=name))


@dataclass
class IsogenyMap:
    degree: int
    source: WModel
    target: WModel
    x_map: CurveFn
    y_map: CurveFn
    raw: "IsogenyMap | None" = None  # untwisted quotient (degree-3 companions)

    def verify(self) -> bool:
        """Exact check that the coordinate maps land on the target."""
        dom = self.x_map.domain
        t_val = dom.base.gen()
        return curve_equation_value(dom, t_val, self.x_map, self.y_map, self.target).is_zero()

    def push(self, P: SectionPt) -> SectionPt:
        return push_point(self, P)


def two_isogeny(K: KernelForm2) -> IsogenyMap:
    """Quotient by the 2-torsion point (0,0), with coordinate maps."""
    model = K.model
    ctx = FunctionField(model.field, model.var)
    a, b = K.a, K.b
    target = WModel(
        model.field,
        model.var,
        ctx.zero,
        -2 * a,
        ctx.zero,
        a * a - 4 * b,
        ctx.zero,
        name=(model.name + "/<(0,0)>") if model.name else "",
    )
    dom = CurveField(model)
    X, Y = dom.X(), dom.Y()
    x_map = (X * X + dom.const(a) * X + dom.const(b)) / X
    y_map = Y * (dom.const(b) - X * X) / (X * X)
    iso = IsogenyMap(2, model, target, x_map, y_map)
    if not iso.verify():
        raise ArithmeticError("2-isogeny maps failed the on-target identity")
    return iso


def three_isogeny_raw(K: KernelForm3) -> IsogenyMap:
    """The raw quotient model and maps, kernel <(0,0)>."""
    model = K.model
    ctx = FunctionField(model.field, model.var)
    A, B = K.A, K.B
    target = WModel(
        model.field,
        model.var,
        A,
        ctx.zero,
        3 * B,
        -6 * A * B,
        -B * (A ** 3 + 9 * B),
        name=(model.name + "/<(0,0)>raw") if model.name else "",
    )
    dom = CurveField(model)
    X, Y = dom.X(), dom.Y()
    cA, cB = dom.const(A), dom.const(B)
    x_map = (X ** 3 + cA * cB * X + cB * cB) / (X * X)
    y_map = (Y * (X ** 3 - cA * X * cB - 2 * cB * cB) - cB * (X ** 3 + cA * cA * X * X + 2 * cA * X * cB + cB * cB)) / (X ** 3)
    iso = IsogenyMap(3, model, target, x_map, y_map)
    if not iso.verify():
        raise ArithmeticError("3-isogeny raw maps failed the on-target identity")
    return iso


def three_isogeny_normalized(K: KernelForm3) -> KernelForm3:
    """Kernel-shaped companion of the quotient: (A, B) -> (-3A, 27B - A^3)."""
    A, B = K.A, K.B
    return KernelForm3.from_coeffs(
        K.model.field,
        K.model.var,
        -3 * A,
        27 * B - A ** 3,
        name=(K.model.name + "/<(0,0)>") if K.model.name else "",
    )


def _lift_model(model: WModel, field) -> WModel:
    if field == model.field:
        return model
    ctx = FunctionField(field, model.var)
    coeffs = [a.map_coefficients(field.coerce, field=field) for a in model.coefficients()]
    return WModel(field, model.var, *coeffs, name=model.name)


def lift_section(P: SectionPt, field) -> SectionPt:
    if P.is_zero():
        return P
    x = P.x.map_coefficients(field.coerce, field=field)
    y = P.y.map_coefficients(field.coerce, field=field)
    return SectionPt(x, y, field_disc=P.field_disc, name=P.name)


def three_isogeny(K: KernelForm3) -> IsogenyMap:
    """Isogeny onto the kernel-shaped companion model.

    The y-coordinate map needs sqrt(-3); the coefficient field is extended
    when necessary.  The ``raw`` attribute carries the untwisted quotient.
    """
    raw = three_isogeny_raw(K)
    norm = three_isogeny_normalized(K)
    field = K.model.field.adjoin_sqrt(-3)
    model = _lift_model(K.model, field)
    raw_target = _lift_model(raw.target, field)
    target = _lift_model(norm.model, field)
    ctx = FunctionField(field, model.var)
    lift = lambda r: r.map_coefficients(field.coerce, field=field) if field != K.model.field else r
    A = lift(K.A)
    B = lift(K.B)
    root = ctx.sqrt_of(-3)
    C = A ** 3 - 27 * B
    r = -A * A * Fraction(1, 3)
    phat = 3 * B - A ** 3 * Fraction(1, 3)
    half = Fraction(1, 2)
    for wsign in (1, -1):
        w = (-phat + wsign * root * C * Fraction(1, 9)) * half
        translated = raw_target.transform(r=r, w=w)
        if translated.a3.is_zero():
            continue
        stilde = translated.a4 / translated.a3
        sheared = translated.transform(s=stilde)
        if not sheared.a2.is_zero():
            continue
        for usign in (1, -1):
            u = root * Fraction(usign, 3)
            final = sheared.transform(u=u)
            if final.coefficients() == target.coefficients():
                dom = CurveField(model)
                X, Y = dom.X(), dom.Y()
                cA, cB = dom.const(A), dom.const(B)
                x1 = (X ** 3 + cA * cB * X + cB * cB) / (X * X)
                y1 = (
                    Y * (X ** 3 - cA * X * cB - 2 * cB * cB)
                    - cB * (X ** 3 + cA * cA * X * X + 2 * cA * X * cB + cB * cB)
                ) / (X ** 3)
                u2inv = dom.const(ctx.coerce(-3))
                x_map = (x1 - dom.const(r)) * u2inv
                y_map = (y1 - dom.const(w) - dom.const(stilde) * (x1 - dom.const(r))) / dom.const(ctx.coerce(u) ** 3)
                iso = IsogenyMap(3, model, target, x_map, y_map, raw=raw)
                if not iso.verify():
                    raise ArithmeticError("3-isogeny normalized maps failed verification")
                return iso
    raise ArithmeticError("no normalization of the 3-isogeny target was found")


def push_point(iso: IsogenyMap, P: SectionPt) -> SectionPt:
    """Image of a section; kernel points map to the zero section."""
    if P.is_zero():
        return SectionPt.zero()
    field = iso.x_map.domain.base.base
    if P.x.field != field:
        big = common_field(field, P.x.field)
        if big != field:
            raise TypeError("section field exceeds the isogeny's coefficient field")
        Pl = lift_section(P, field)
    else:
        Pl = P
    if not on_curve(iso.source, Pl):
        raise ValueError("section does not lie on the isogeny source")
    if Pl.x.is_zero():
        return SectionPt.zero()
    x = iso.x_map.evaluate(Pl.x, Pl.y)
    y = iso.y_map.evaluate(Pl.x, Pl.y)
    return SectionPt(x, y, field_disc=detect_field_disc(x, y))


def detect_field_disc(x: RatFn, y: RatFn) -> int | None:
    """Squarefree d with both coordinates in Q(sqrt d)(t); None if bigger."""
    field = x.field
    if field == QQ:
        return 1
    if not isinstance(field, Tower):
        return None
    seen = set()
    for r in (x, y):
        for p in (r.num, r.den):
            for c in p.coeffs:
                e = field.coerce(c)
                for i in range(1, field.dim):
                    if e.coeffs[i] != 0:
                        seen.add(i)
    if not seen:
        return 1
    if len(seen) > 1:
        return None
    from .algebra.fields import squarefree_decompose

    _, d = squarefree_decompose(field.basis_radicand(seen.pop()))
    return d


def to_kernel_form(model: WModel, P: SectionPt, n: int):
    """Move a torsion point of exact order n (2 or 3) to (0, 0).

    Returns (kernel_form, normalized_point_map) where the map sends source
    coordinates to the kernel form's coordinates.
    """
    if n not in (2, 3):
        raise ValueError("only orders 2 and 3 are supported")
    order = torsion_order(model, P, bound=n)
    if order != n:
        raise ValueError(f"point has order {order}, expected {n}")
    ctx = FunctionField(model.field, model.var)
    if n == 2:
        sq = model.complete_square()
        s0 = -model.a1 * Fraction(1, 2)
        w0 = -model.a3 * Fraction(1, 2)
        # (x, y) -> (x, y + s0 x + w0) sends model to sq
        x0 = P.x
        y0 = P.y + s0 * P.x + w0
        if not y0.is_zero():
            raise ArithmeticError("2-torsion point should have y = 0 after completing the square")
        shifted = sq.transform(r=x0)
        K = KernelForm2(shifted)

        def pmap2(Q: SectionPt) -> SectionPt:
            if Q.is_zero():
                return Q
            return SectionPt(Q.x - x0, Q.y + s0 * Q.x + w0, field_disc=Q.field_disc)

        return K, pmap2
    x0, y0 = P.x, P.y
    translated = model.transform(r=x0, w=y0)
    if translated.a3.is_zero():
        raise ArithmeticError("translated 3-torsion point is singular")
    stilde = translated.a4 / translated.a3
    sheared = translated.transform(s=stilde)
    if not (sheared.a2.is_zero() and sheared.a4.is_zero() and sheared.a6.is_zero()):
        raise ArithmeticError("translation did not produce a kernel form (is P 3-torsion?)")
    K = KernelForm3(sheared)

    def pmap3(Q: SectionPt) -> SectionPt:
        if Q.is_zero():
            return Q
        xq = Q.x - x0
        yq = Q.y - y0 - stilde * xq
        return SectionPt(xq, yq, field_disc=Q.field_disc)

    return K, pmap3


def dual_composition_is_multiplication(K: KernelForm3) -> int:
    """Compose the 3-isogeny with its dual; returns +3 or -3 accordingly.

    The dual is built by the same recipe on the companion (A1, B1); scaling
    by u = 9 lands back on the source, so the composite must be [3] or [-3]
    on the generic point.  Verified in the curve function field.
    """
    phi = three_isogeny(K)
    field = phi.target.field
    K1 = KernelForm3(phi.target)
    psi = three_isogeny(K1)
    # psi.target = (9A, 729B); scale u = 9 returns to (A, B)
    back = psi.target.transform(u=9)
    src = _lift_model(phi.source, psi.target.field)
    if back.coefficients() != _lift_model(src, back.field).coefficients():
        raise ArithmeticError("dual target does not rescale onto the source")
    bigfield = psi.target.field
    model = _lift_model(phi.source, bigfield)
    dom = CurveField(model)
    X, Y = dom.X(), dom.Y()
    # composite: phi then psi then (x, y) -> (x/81, y/729)
    def lift_fn(f: CurveFn, domain: CurveField) -> CurveFn:
        conv = lambda p: p.map_coefficients(
            lambda c: FunctionField(bigfield, model.var).coerce(c), field=FunctionField(bigfield, model.var)
        )
        return CurveFn(domain, conv(f.u), conv(f.v), conv(f.d))

    phx, phy = lift_fn(phi.x_map, dom), lift_fn(phi.y_map, dom)
    psx_u, psx_v, psx_d = psi.x_map.u, psi.x_map.v, psi.x_map.d
    def compose(mapfn: CurveFn) -> CurveFn:
        num = (_eval_poly_at(mapfn.u, phx, dom) + _eval_poly_at(mapfn.v, phx, dom) * phy).reduced()
        den = _eval_poly_at(mapfn.d, phx, dom).reduced()
        return (num / den).reduced()

    comp_x = compose(psi.x_map) * Fraction(1, 81)
    comp_y = compose(psi.y_map) * Fraction(1, 729)
    # [3] on the generic point via the exact group law in the function field
    gx, gy = _generic_multiple(model, dom, 3)
    if (comp_x - gx).is_zero() and (comp_y - gy).is_zero():
        return 3
    # [-3]: negate
    negy = -gy - dom.const(model.a1) * gx - dom.const(model.a3)
    if (comp_x - gx).is_zero() and (comp_y - negy).is_zero():
        return -3
    raise ArithmeticError("dual composition is not multiplication by 3")


def _eval_poly_at(p: Poly, value: CurveFn, dom: CurveField) -> CurveFn:
    acc = dom.zero
    for c in reversed(p.coeffs):
        acc = acc * value + dom.const(dom.base.coerce(c))
    return acc


def _generic_multiple(model: WModel, dom: CurveField, n: int) -> tuple[CurveFn, CurveFn]:
    """Coordinates of [n](X, Y) as curve functions (chord-tangent law)."""
    a1, a2, a3, a4, a6 = (dom.const(a) for a in model.coefficients())
    X, Y = dom.X(), dom.Y()

    def pt_add(p, q):
        (x1, y1), (x2, y2) = p, q
        if (x1 - x2).is_zero():
            lam = ((3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)).reduced()
        else:
            lam = ((y2 - y1) / (x2 - x1)).reduced()
        nu = (y1 - lam * x1).reduced()
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2).reduced()
        y3 = (-(lam + a1) * x3 - nu - a3).reduced()
        return (x3, y3)

    result = None
    base = (X, Y)
    k = n
    while k:
        if k & 1:
            result = base if result is None else pt_add(result, base)
        k >>= 1
        if k:
            base = pt_add(base, base)
    return result


def cubic_model(K: KernelForm3):
    """The plane cubic W^3 + A Z W + B - Z^3 = 0 with its Weierstrass maps."""
    return CubicModel(K)


class CubicModel:
    """Cubic form of the quotient and the printed coordinate maps."""

    def __init__(self, K: KernelForm3):
        self.K = K
        self.A = K.A
        self.B = K.B

    def weierstrass_model(self) -> WModel:
        A, B = self.A, self.B
        field, var = self.K.model.field, self.K.model.var
        C = A ** 3 - 27 * B
        return WModel(
            field,
            var,
            3 * A,
            -9 * A * A,
            243 * B - 9 * A ** 3,
            27 * A * C,
            -27 * C * C,
            name="cubic-Weierstrass",
        )

    def verify_roundtrip(self) -> bool:
        """Symbolic round trip cubic -> Weierstrass -> cubic is the identity.

        Works in K(Z)[W]/(W^3 + A Z W + B - Z^3): W and Z map to (X2, Y2)
        and back; both must return unchanged, and (X2, Y2) must satisfy the
        Weierstrass equation.
        """
        ring = _CubicRing(self)
        W, Z = ring.W(), ring.Z()
        A = ring.const_from_base(self.A)
        B = ring.const_from_base(self.B)
        C = A ** 3 - 27 * B
        den = 3 * (W - Z) + A
        X2 = 3 * C / den
        Y2 = -27 * Z * C / den
        # Weierstrass equation from weierstrass_model() must vanish
        Wm = self.weierstrass_model()
        a1, a2, a3, a4, a6 = (ring.const_from_base(a) for a in Wm.coefficients())
        eq = Y2 * Y2 + a1 * X2 * Y2 + a3 * Y2 - (X2 ** 3 + a2 * X2 * X2 + a4 * X2 + a6)
        if not eq.is_zero():
            return False
        ninth = Fraction(1, 9)
        W_back = (-(243 * B) - 3 * X2 * A + 9 * A ** 3 - Y2) * ninth / X2
        Z_back = -(Y2 * ninth) / X2
        return (W_back - W).is_zero() and (Z_back - Z).is_zero()


class _CubicRing:
    """K(t)(Z)[W] / (W^3 + A Z W + B - Z^3), elements as W-polynomials."""

    def __init__(self, cubic: CubicModel):
        field, var = cubic.K.model.field, cubic.K.model.var
        self.base = FunctionField(FunctionField(field, var), "Z")
        A = self.base.coerce(cubic.A)
        B = self.base.coerce(cubic.B)
        Z = self.base.gen()
        # W^3 = Z^3 - B - A Z W
        self.rel_const = Z ** 3 - B
        self.rel_lin = -A * Z
        self._zero = _CubicElem(self, (self.base.zero, self.base.zero, self.base.zero))
        self._one = _CubicElem(self, (self.base.one, self.base.zero, self.base.zero))

    def W(self):
        return _CubicElem(self, (self.base.zero, self.base.one, self.base.zero))

    def Z(self):
        return _CubicElem(self, (self.base.gen(), self.base.zero, self.base.zero))

    def const_from_base(self, r):
        return _CubicElem(self, (self.base.coerce(r), self.base.zero, self.base.zero))

    def coerce(self, x):
        if isinstance(x, _CubicElem):
            return x
        return _CubicElem(self, (self.base.coerce(x), self.base.zero, self.base.zero))


class _CubicElem:
    __slots__ = ("ring", "c")

    def __init__(self, ring: _CubicRing, c):
        self.ring = ring
        self.c = tuple(c)

    def is_zero(self):
        return all(v.is_zero() for v in self.c)

    def _w(self, other):
        return self.ring.coerce(other)

    def __add__(self, other):
        o = self._w(other)
        return _CubicElem(self.ring, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return _CubicElem(self.ring, tuple(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._w(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._w(other)
        raw = [self.ring.base.zero] * 5
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                raw[i + j] = raw[i + j] + a * b
        # reduce W^3 and W^4
        rc, rl = self.ring.rel_const, self.ring.rel_lin
        if not raw[4].is_zero():
            raw[1] = raw[1] + raw[4] * rc
            raw[2] = raw[2] + raw[4] * rl
            raw[4] = self.ring.base.zero
        if not raw[3].is_zero():
            raw[0] = raw[0] + raw[3] * rc
            raw[1] = raw[1] + raw[3] * rl
            raw[3] = self.ring.base.zero
        return _CubicElem(self.ring, tuple(raw[:3]))

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.ring._one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        """Invert via the matrix of multiplication by self on the W-basis."""
        cols = []
        basis = (self.ring._one, self.ring.W(), self.ring.W() * self.ring.W())
        for b in basis:
            cols.append((self * b).c)
        # solve M * v = e0 with M[i][j] = cols[j][i]
        M = [[cols[j][i] for j in range(3)] for i in range(3)]
        rhs = [self.ring.base.one, self.ring.base.zero, self.ring.base.zero]
        v = _solve3(M, rhs, self.ring.base)
        return _CubicElem(self.ring, tuple(v))

    def __truediv__(self, other):
        return self * self._w(other).inverse()

    def __rtruediv__(self, other):
        return self._w(other) * self.inverse()


def _solve3(M, rhs, fieldctx):
    """Gaussian elimination for a 3x3 system over a field context."""
    n = 3
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not A[r][col].is_zero():
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = fieldctx.one / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [v - f * w for v, w in zip(A[r], A[col])]
    return [A[i][n] for i in range(3)]
