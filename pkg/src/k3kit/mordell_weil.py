"""Shioda height pairing, fiber-component bookkeeping and NS assembly.

Heights use h(P) = 2*chi + 2 (P.O) - sum_v contr_v(P) with chi = 2, and the
pairing is recovered from heights of group-law sums:
<P, Q> = (h(P+Q) - h(P) - h(Q)) / 2.  Component classes are determined the
way the source computes them: reduce multiples and small combinations of
sections modulo the place and test against the singular point of the fiber.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra.factor import factor_over_field
from .algebra.fields import QQ, common_field
from .algebra.poly import Poly
from .algebra.ratfunc import FunctionField, RatFn
from .weierstrass.kodaira import (
    FiberConfig,
    FiberData,
    KodairaType,
    Place,
    ResidueRing,
    analyze_fibers,
    infinity_chart,
    kodaira_type_at,
    minimalize_at,
)
from .weierstrass.model import WModel
from .weierstrass.points import SectionPt, add, multiply, negate, on_curve

CHI = 2  # Euler characteristic of the structure sheaf for a K3 surface


class ComponentAmbiguity(ArithmeticError):
    """Raised when local data cannot pin down a component class."""


_INF_RED = ("O",)  # reduction marker: the point lands on the zero section


class SectionArith:
    """Memoized group-law arithmetic shared across fiber environments.

    Reductions of multiples and small combinations are computed directly in
    the residue field with the chord formulas, which are valid reductions of
    the exact formulas whenever no denominator vanishes mod the place; every
    ambiguous step falls back to the exact global computation.
    """

    def __init__(self, model: WModel):
        self.model = model
        self._mult: dict = {}
        self._sum: dict = {}
        self._red: dict = {}
        self._chain: dict = {}

    @staticmethod
    def key(P: SectionPt):
        return ("O",) if P.is_zero() else (P.x, P.y)

    def multiple(self, P: SectionPt, k: int) -> SectionPt:
        if k == 0:
            return SectionPt.zero()
        base = self.key(P)
        cur = self._mult.setdefault(base, {1: P})
        have = max(cur)
        while have < k:
            cur[have + 1] = add(self.model, cur[have], P)
            have += 1
        return cur[k]

    def sum(self, P: SectionPt, Q: SectionPt) -> SectionPt:
        k = (self.key(P), self.key(Q))
        if k not in self._sum:
            self._sum[k] = add(self.model, P, Q)
        return self._sum[k]

    # --- residue-field arithmetic -------------------------------------
    def red(self, env: "FiberEnv", P: SectionPt):
        """Reduction at the env's place: _INF_RED or (xbar, ybar)."""
        k = (id(env), self.key(P))
        if k not in self._red:
            r = env.reduction(P)
            self._red[k] = _INF_RED if r is None else r
        return self._red[k]

    def _env_add(self, env: "FiberEnv", A, B, doubling: bool):
        """Chord formulas mod the place; None when a fallback is required."""
        if A is _INF_RED:
            return B
        if B is _INF_RED:
            return A
        ring = env.ring
        a1, a2, a3, a4, _a6 = env.abar
        xa, ya = A
        xb, yb = B
        if doubling:
            den = (2 * ya + a1 * xa + a3) % ring.modulus
            if ring.is_zero(den):
                return None
            lam = ring.mul(
                (3 * xa * xa + 2 * a2 * xa + a4 - a1 * ya) % ring.modulus, ring.inv(den)
            )
        else:
            dx = (xb - xa) % ring.modulus
            if ring.is_zero(dx):
                return None  # branch unclear from reductions alone
            lam = ring.mul((yb - ya) % ring.modulus, ring.inv(dx))
        nu = (ya - ring.mul(lam, xa)) % ring.modulus
        x3 = (ring.mul(lam, lam) + ring.mul(a1, lam) - a2 - xa - xb) % ring.modulus
        y3 = (-(ring.mul(lam + a1, x3)) - nu - a3) % ring.modulus
        return (x3, y3)

    def env_multiple_red(self, env: "FiberEnv", P: SectionPt, k: int):
        """Reduction of k*P, computed locally when possible."""
        if k == 0:
            return _INF_RED
        memo = self._chain.setdefault((id(env), self.key(P)), {})
        if k in memo:
            return memo[k]
        if k == 1:
            memo[1] = self.red(env, P)
            return memo[1]
        prev = self.env_multiple_red(env, P, k - 1)
        out = self._env_add(env, prev, self.red(env, P), doubling=(k == 2))
        if out is None:
            out = self.red(env, self.multiple(P, k))
        memo[k] = out
        return out

    def env_combo_red(self, env: "FiberEnv", P: SectionPt, a: int, R: SectionPt):
        """Reduction of a*P + R."""
        accP = self.env_multiple_red(env, P, a)
        out = self._env_add(env, accP, self.red(env, R), doubling=False)
        if out is None:
            out = self.red(env, self.sum(self.multiple(P, a), R) if a else R)
        return out

    def env_diff_red(self, env: "FiberEnv", P: SectionPt, R: SectionPt):
        """Reduction of P - R."""
        a1, _a2, a3, _a4, _a6 = env.abar
        rR = self.red(env, R)
        if rR is _INF_RED:
            return self.red(env, P)
        ring = env.ring
        negR = (rR[0], (-rR[1] - a1 * rR[0] - a3) % ring.modulus)
        out = self._env_add(env, self.red(env, P), negR, doubling=False)
        if out is None:
            out = self.red(env, self.sum(P, negate(self.model, R)))
        return out

    def hits_identity(self, env: "FiberEnv", state) -> bool:
        if state is _INF_RED:
            return True
        if env.sing is None:
            return True
        x0, y0 = env.sing
        return not (env.ring.is_zero(state[0] - x0) and env.ring.is_zero(state[1] - y0))

    def on_identity(self, env: "FiberEnv", P: SectionPt) -> bool:
        return self.hits_identity(env, self.red(env, P))


def lift_model(model: WModel, field) -> WModel:
    if field == model.field:
        return model
    coeffs = [a.map_coefficients(field.coerce, field=field) for a in model.coefficients()]
    return WModel(field, model.var, *coeffs, name=model.name)


def lift_section(P: SectionPt, field) -> SectionPt:
    if P.is_zero() or P.x.field == field:
        return P
    return SectionPt(
        P.x.map_coefficients(field.coerce, field=field),
        P.y.map_coefficients(field.coerce, field=field),
        field_disc=P.field_disc,
        name=P.name,
    )


def on_curve_check(model: WModel, P: SectionPt):
    if not on_curve(model, P):
        raise ValueError(f"section {P.name or P!r} is not on {model.name or 'the model'}")


# ---------------------------------------------------------------------------
# fiber environments: reduction of sections at one place (infinity included)
# ---------------------------------------------------------------------------


class FiberEnv:
    """One bad place of the working model, ready to reduce sections."""

    def __init__(self, model: WModel, place: Place):
        self.place = place
        if place.infinite:
            chart, u = infinity_chart(model)
            self.work_model = chart
            self.chart_u = u
            q = Poly.gen(model.field, chart.var)
            self.data = kodaira_type_at(chart, Place(q))
            self.ring = ResidueRing(q)
            self._orig_var = model.var
        else:
            local, u = minimalize_at(model, place)
            self.work_model = local
            self.local_u = u
            self.data = kodaira_type_at(local, place)
            self.ring = ResidueRing(place.poly)
            self._orig_var = model.var
        self.kodaira = self.data.kodaira
        self.sing = self.data.singular_point
        self._abar = None

    @property
    def abar(self):
        """Reductions of the local model's a-invariants at the place."""
        if self._abar is None:
            m = self.work_model
            self._abar = tuple(self.ring.reduce(a) for a in (m.a1, m.a2, m.a3, m.a4, m.a6))
        return self._abar

    @property
    def degree(self) -> int:
        return self.place.degree

    def transfer(self, P: SectionPt) -> SectionPt:
        """Express a section in the local chart / minimal model coordinates."""
        if P.is_zero():
            return P
        if self.place.infinite:
            field = self.work_model.field
            svar = self.work_model.var
            ctx = FunctionField(field, svar)
            s = ctx.gen()
            u = self.chart_u
            x = P.x(1 / s) / u ** 2
            y = P.y(1 / s) / u ** 3
            return SectionPt(x, y, field_disc=P.field_disc)
        u = self.local_u
        if u == FunctionField(self.work_model.field, self._orig_var).one:
            return P
        return SectionPt(P.x / u ** 2, P.y / u ** 3, field_disc=P.field_disc)

    def reduction(self, P: SectionPt):
        """None for the zero section / pole (identity side), else (xbar, ybar)."""
        if P.is_zero():
            return None
        Q = self.transfer(P)
        try:
            xb = self.ring.reduce(Q.x)
            yb = self.ring.reduce(Q.y)
        except ZeroDivisionError:
            return None
        return xb, yb

    def hits_singular(self, P: SectionPt) -> bool:
        red = self.reduction(P)
        if red is None or self.sing is None:
            return False
        x0, y0 = self.sing
        return self.ring.is_zero(red[0] - x0) and self.ring.is_zero(red[1] - y0)

    def on_identity(self, P: SectionPt) -> bool:
        return not self.hits_singular(P)


# ---------------------------------------------------------------------------
# component classes and local contributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentClass:
    """Abstract class of a section in one fiber's component group.

    For I_n the label is the cycle index (oriented per fiber); for *-fibers
    and III/IV families it is 0 = identity, 1 = near (I_n*), 2/3 = far pair,
    or a relative label for the III/IV cyclic groups.
    """

    kind: str
    label: int
    n: int = 0

    def is_identity(self) -> bool:
        return self.label == 0


def _class_order(env: FiberEnv, arith: SectionArith, P: SectionPt, bound: int) -> int:
    for k in range(1, bound + 1):
        if arith.hits_identity(env, arith.env_multiple_red(env, P, k)):
            return k
    raise ArithmeticError(f"no multiple of {P.name or 'section'} met the identity component")


def resolve_fiber_classes(model: WModel, env: FiberEnv, sections: list[SectionPt], hints=None, arith: SectionArith | None = None):
    """Consistent component classes for the given sections at one fiber."""
    ktype = env.kodaira
    hints = hints or {}
    arith = arith or SectionArith(model)
    out: list[ComponentClass] = []
    if ktype.kind == "I" and ktype.n >= 2:
        n = ktype.n
        assigned: list[tuple[SectionPt, int]] = []
        for P in sections:
            if arith.on_identity(env, P):
                out.append(ComponentClass("I", 0, n))
                continue
            m = _class_order(env, arith, P, n)
            cands = {c for c in range(1, n) if n // gcd(c, n) == m}
            for R, cR in assigned:
                if len(cands) <= 1:
                    break
                # sweep a*P + R (cheap: small multiples of P), then P + a*R
                for a in range(n):
                    if len(cands) <= 1:
                        break
                    predictions = {((a * c + cR) % n == 0) for c in cands}
                    if len(predictions) == 2:  # this combo separates someone
                        hit = not arith.hits_identity(env, arith.env_combo_red(env, P, a, R))
                        cands = {c for c in cands if (((a * c + cR) % n) != 0) == hit}
                for a in range(n):
                    if len(cands) <= 1:
                        break
                    predictions = {((c + a * cR) % n == 0) for c in cands}
                    if len(predictions) == 2:
                        hit = not arith.hits_identity(env, arith.env_combo_red(env, R, a, P))
                        cands = {c for c in cands if (((c + a * cR) % n) != 0) == hit}
            if len(cands) > 1:
                # the global i <-> n-i flip is harmless when every assigned
                # class is 2-torsion in Z/n; otherwise give up loudly
                cmin = min(cands)
                flip_ok = (
                    cands == {cmin, (n - cmin) % n}
                    and all((2 * cR) % n == 0 for _R, cR in assigned)
                )
                if not flip_ok:
                    raise ComponentAmbiguity(
                        f"cannot separate classes {sorted(cands)} at {env.place} (I_{n})"
                    )
                cands = {cmin}
            c = cands.pop()
            out.append(ComponentClass("I", c, n))
            assigned.append((P, c))
        return out
    if ktype.kind in ("II", "II*"):
        return [ComponentClass(ktype.kind, 0) for _ in sections]
    if ktype.kind in ("III", "III*"):
        return [
            ComponentClass(ktype.kind, 0 if arith.on_identity(env, P) else 1) for P in sections
        ]
    if ktype.kind in ("IV", "IV*"):
        # cyclic of order 3: relative labels via difference tests
        labels = []
        ref = None
        for P in sections:
            if arith.on_identity(env, P):
                labels.append(0)
                continue
            if ref is None:
                labels.append(1)
                ref = P
                continue
            diff = arith.env_diff_red(env, P, ref)
            labels.append(1 if arith.hits_identity(env, diff) else 2)
        return [ComponentClass(ktype.kind, l) for l in labels]
    if ktype.kind == "I*":
        n = ktype.n
        labels = []
        far_ref: SectionPt | None = None
        for idx, P in enumerate(sections):
            if arith.on_identity(env, P):
                labels.append(0)
                continue
            if n == 0:
                # D4: three symmetric leaves; relative labels 2, 3, 1 (xor group)
                assigned = getattr(env, "_leaf_refs", None)
                if assigned is None:
                    assigned = env._leaf_refs = []
                label = None
                for refP, refLabel in assigned:
                    diff = arith.env_diff_red(env, P, refP)
                    if arith.hits_identity(env, diff):
                        label = refLabel
                        break
                if label is None:
                    for cand in (2, 3, 1):
                        if all(l != cand for _x, l in assigned):
                            label = cand
                            break
                    assigned.append((P, label))
                labels.append(label)
                continue
            if n % 2 == 1:
                if arith.hits_identity(env, arith.env_multiple_red(env, P, 2)):
                    labels.append(2)  # the order-2 (near) class of Z/4
                else:
                    if far_ref is None:
                        labels.append(1)
                        far_ref = P
                    else:
                        diff = arith.env_diff_red(env, P, far_ref)
                        labels.append(1 if arith.hits_identity(env, diff) else 3)
                continue
            hint = hints.get(P.name)
            if hint is None:
                raise ComponentAmbiguity(
                    f"I_{n}* at {env.place}: near/far needs a hint for {P.name or 'section'}"
                )
            labels.append(hint)
        return [ComponentClass("I*", l, n) for l in labels]
    raise ValueError(f"unsupported fiber type {ktype}")


def _star_near_label(n: int) -> int:
    # component group of I_n*: Z/4 for n odd (near = 2), (Z/2)^2 otherwise
    return 2 if n % 2 == 1 else 1


def contr_single(c: ComponentClass) -> Fraction:
    if c.is_identity():
        return Fraction(0)
    if c.kind == "I":
        return Fraction(c.label * (c.n - c.label), c.n)
    if c.kind == "I*":
        near = _star_near_label(c.n)
        return Fraction(1) if c.label == near else 1 + Fraction(c.n, 4)
    return {
        "III": Fraction(1, 2),
        "IV": Fraction(2, 3),
        "III*": Fraction(3, 2),
        "IV*": Fraction(4, 3),
        "II": Fraction(0),
        "II*": Fraction(0),
    }[c.kind]


def contr_pair(c: ComponentClass, d: ComponentClass) -> Fraction:
    if c.is_identity() or d.is_identity():
        return Fraction(0)
    if c.kind == "I":
        i, j = sorted((c.label, d.label))
        return Fraction(i * (c.n - j), c.n)
    if c.kind == "I*":
        near = _star_near_label(c.n)
        c_near, d_near = c.label == near, d.label == near
        if c_near and d_near:
            return Fraction(1)
        if c_near or d_near:
            return Fraction(1, 2)
        if c.label == d.label:
            return 1 + Fraction(c.n, 4)
        return Fraction(1, 2) + Fraction(c.n, 4)
    if c.kind in ("III", "III*"):
        return contr_single(c)
    if c.kind == "IV":
        return Fraction(2, 3) if c.label == d.label else Fraction(1, 3)
    if c.kind == "IV*":
        return Fraction(4, 3) if c.label == d.label else Fraction(2, 3)
    return Fraction(0)


def class_add(c: ComponentClass, d: ComponentClass) -> ComponentClass:
    """Sum in the component group (classes are additive on sections)."""
    if c.kind != d.kind or c.n != d.n:
        raise ValueError("component classes from different fibers")
    if c.kind == "I":
        return ComponentClass("I", (c.label + d.label) % c.n, c.n)
    if c.kind in ("III", "III*"):
        return ComponentClass(c.kind, c.label ^ d.label)
    if c.kind in ("IV", "IV*"):
        return ComponentClass(c.kind, (c.label + d.label) % 3)
    if c.kind == "I*":
        if c.n % 2 == 1:
            return ComponentClass("I*", (c.label + d.label) % 4, c.n)
        return ComponentClass("I*", c.label ^ d.label, c.n)
    return ComponentClass(c.kind, 0, c.n)


# ---------------------------------------------------------------------------
# intersection with the zero section and heights
# ---------------------------------------------------------------------------


def intersect_zero(model: WModel, P: SectionPt, check: bool = True) -> int:
    """(P.O): half pole orders of x over all places, infinity chart included.

    Only the squarefree structure of the denominator is needed (pole order
    times residue degree sums to multiplicity * squarefree-part degree), so
    no irreducible factorization happens here.
    """
    if P.is_zero():
        raise ValueError("(O.O) uses the convention -chi inside NS assembly only")
    if check:
        on_curve_check(model, P)
    from .algebra.poly import squarefree_decomposition

    total = 0
    den = P.x.den
    if not den.is_constant():
        for g, mult in squarefree_decomposition(den):
            if mult % 2:
                raise ArithmeticError(f"odd pole order {mult} of x along {g!r}")
            total += (mult // 2) * g.degree
    env = FiberEnvAtInfinity(model)
    xs = env.x_of(P)
    if not xs.is_zero():
        v = xs.valuation(env.s_poly)
        if v < 0:
            if v % 2:
                raise ArithmeticError("odd pole order of x at infinity")
            total += (-v) // 2
    return total


class FiberEnvAtInfinity:
    """Just the chart transform, for (P.O) at t = infinity."""

    def __init__(self, model: WModel):
        chart, u = infinity_chart(model)
        self.chart = chart
        self.u = u
        self.s_poly = Poly.gen(model.field, chart.var)
        self.ctx = FunctionField(model.field, chart.var)

    def x_of(self, P: SectionPt) -> RatFn:
        s = self.ctx.gen()
        return P.x(1 / s) / self.u ** 2


class HeightContext:
    """Shared environment for heights of sections on one fibration."""

    def __init__(self, model: WModel, sections: list[SectionPt], config: FiberConfig | None = None, hints=None):
        from .algebra.fields import RationalField, Tower

        fields = [model.field] + [P.x.field for P in sections if not P.is_zero()]
        self.field = common_field(*fields)
        self.model = lift_model(model, self.field)
        self.sections = [lift_section(P, self.field) for P in sections]
        for P in self.sections:
            on_curve_check(self.model, P)
        self.hints = hints or {}
        factorable = isinstance(self.field, (RationalField, Tower))
        if config is None or (factorable and self.field != model.field):
            # places must split correctly over the working field
            config = analyze_fibers(self.model)
            reducible = [(f.place, f.kodaira) for f in config if f.kodaira.component_count > 1]
        else:
            reducible = []
            for f in config:
                if f.kodaira.component_count <= 1:
                    continue
                place = f.place
                if not place.infinite and place.poly.field != self.field:
                    place = Place(place.poly.map_coefficients(self.field.coerce, field=self.field))
                reducible.append((place, f.kodaira))
        self.config = config
        self.arith = SectionArith(self.model)
        self.envs = [FiberEnv(self.model, place) for place, _k in reducible]
        for env, (_p, declared) in zip(self.envs, reducible):
            if env.kodaira != declared:
                raise ArithmeticError(
                    f"declared fiber {declared} at {env.place} but computed {env.kodaira}"
                )

    def _key(self, P: SectionPt):
        return ("O",) if P.is_zero() else (P.x, P.y)

    def classes_for(self, P: SectionPt) -> list[ComponentClass]:
        return [
            resolve_fiber_classes(self.model, env, [P], hints=self.hints.get(repr(env.place)), arith=self.arith)[0]
            for env in self.envs
        ]

    def height(self, P: SectionPt) -> Fraction:
        """h(P) = 4 + 2 (P.O) - sum of local contributions (chi = 2)."""
        if P.is_zero():
            return Fraction(0)
        P = lift_section(P, self.field)
        key = (P.x, P.y)
        cached = getattr(self, "_hcache", None)
        if cached is None:
            cached = self._hcache = {}
        if key in cached:
            return cached[key]
        total = Fraction(2 * CHI) + 2 * intersect_zero(self.model, P, check=False)
        for env in self.envs:
            c = self._lone_class(env, P)
            total -= env.degree * contr_single(c)
        cached[key] = total
        return total

    def _lone_class(self, env: FiberEnv, P: SectionPt) -> ComponentClass:
        ktype = env.kodaira
        if ktype.kind == "I" and ktype.n >= 2:
            if self.arith.on_identity(env, P):
                return ComponentClass("I", 0, ktype.n)
            n = ktype.n
            m = _class_order(env, self.arith, P, n)
            cands = {c for c in range(1, n) if n // gcd(c, n) == m}
            vals = {Fraction(c * (n - c), n) for c in cands}
            if len(vals) > 1:
                hint = (self.hints.get(repr(env.place)) or {}).get(P.name)
                if hint is None:
                    raise ComponentAmbiguity(
                        f"I_{n} at {env.place}: classes {sorted(cands)} give different contributions"
                    )
                return ComponentClass("I", hint, n)
            return ComponentClass("I", min(cands), n)
        return resolve_fiber_classes(self.model, env, [P], hints=self.hints.get(repr(env.place)), arith=self.arith)[0]

    def _joint_classes(self, P: SectionPt, Q: SectionPt):
        """Consistently oriented classes of P and Q at every reducible fiber."""
        out = []
        for env in self.envs:
            cP, cQ = resolve_fiber_classes(
                self.model, env, [P, Q], hints=self.hints.get(repr(env.place)), arith=self.arith
            )
            out.append((env, cP, cQ))
        return out

    def _height_of_sum(self, S: SectionPt, fiber_classes) -> Fraction:
        """h(P+Q) from the sum's pole orders and the added classes."""
        if S.is_zero():
            return Fraction(0)
        total = Fraction(2 * CHI) + 2 * intersect_zero(self.model, S, check=False)
        for env, cP, cQ in fiber_classes:
            total -= env.degree * contr_single(class_add(cP, cQ))
        return total

    def pairing(self, P: SectionPt, Q: SectionPt) -> Fraction:
        if P.is_zero() or Q.is_zero():
            return Fraction(0)
        P = lift_section(P, self.field)
        Q = lift_section(Q, self.field)
        S = self.arith.sum(P, Q)
        joint = self._joint_classes(P, Q)
        hS = self._height_of_sum(S, joint)
        return (hS - self.height(P) - self.height(Q)) / 2

    def height_gram(self, sections: list[SectionPt] | None = None):
        secs = sections if sections is not None else self.sections
        secs = [lift_section(P, self.field) for P in secs]
        r = len(secs)
        H = [[Fraction(0)] * r for _ in range(r)]
        hs = [self.height(P) for P in secs]
        for i in range(r):
            H[i][i] = hs[i]
            for j in range(i + 1, r):
                H[i][j] = H[j][i] = self.pairing(secs[i], secs[j])
        return H

    def sections_intersection(self, P: SectionPt, Q: SectionPt) -> int:
        """(P.Q) from the pairing identity; exact nonnegative integer."""
        P = lift_section(P, self.field)
        Q = lift_section(Q, self.field)
        if P == Q:
            raise ValueError("(P.P) is -2 by adjunction; pass distinct sections")
        pq = self.pairing(P, Q)
        total = Fraction(CHI) + intersect_zero(self.model, P, check=False) + intersect_zero(self.model, Q, check=False) - pq
        for env in self.envs:
            cP, cQ = resolve_fiber_classes(
                self.model, env, [P, Q], hints=self.hints.get(repr(env.place)), arith=self.arith
            )
            total -= env.degree * contr_pair(cP, cQ)
        if total.denominator != 1 or total < 0:
            raise ArithmeticError(
                f"pairing identity violated: (P.Q) = {total} is not a nonnegative integer"
            )
        return int(total)


def height(model: WModel, P: SectionPt, config: FiberConfig | None = None, hints=None) -> Fraction:
    return HeightContext(model, [P], config=config, hints=hints).height(P)


def pairing(model: WModel, P: SectionPt, Q: SectionPt, config: FiberConfig | None = None, hints=None) -> Fraction:
    return HeightContext(model, [P, Q], config=config, hints=hints).pairing(P, Q)


def height_gram(model: WModel, sections: list[SectionPt], config: FiberConfig | None = None, hints=None):
    return HeightContext(model, sections, config=config, hints=hints).height_gram()


def sections_intersection(model: WModel, P: SectionPt, Q: SectionPt, config: FiberConfig | None = None, hints=None) -> int:
    return HeightContext(model, [P, Q], config=config, hints=hints).sections_intersection(P, Q)


def component_of(model: WModel, place: Place, P: SectionPt, config: FiberConfig | None = None, hints=None) -> ComponentClass:
    """Component class of one section at one place."""
    ctx = HeightContext(model, [P], config=config, hints=hints)
    for env in ctx.envs:
        if env.place == place:
            return resolve_fiber_classes(ctx.model, env, [lift_section(P, ctx.field)], hints=hints)[0]
    raise ValueError(f"{place} is not a reducible fiber of the model")


def gram_det(H) -> Fraction:
    n = len(H)
    M = [row[:] for row in H]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return det


def shioda_tate_disc(config: FiberConfig, height_matrix, torsion_order: int = 1) -> Fraction:
    """|det NS| = prod(root lattice dets) * det(height Gram) / torsion^2."""
    det_h = gram_det(height_matrix) if height_matrix else Fraction(1)
    return Fraction(config.root_lattice_det_product()) * det_h / torsion_order ** 2


# ---------------------------------------------------------------------------
# NS Gram assembly
# ---------------------------------------------------------------------------

# Per-fiber basis layouts: list of (component label, adjacency) in the order
# the source lists them.  Adjacency is within the fiber (pairs of indices).


def _fiber_block(ktype: KodairaType) -> tuple[list[object], list[tuple[int, int]]]:
    """Component labels (excluding the identity) and their intersection edges.

    Labels: for I_n the cycle indices 1..n-1; for I_0* leaves/center; for
    I_n* the far pair, the spine (descending), then the near leaf, matching
    the printed matrices; for IV* the Bourbaki E6 order 1..6.
    """
    if ktype.kind == "I" and ktype.n >= 2:
        n = ktype.n
        labels = [("I", i) for i in range(1, n)]
        edges = [(i, i + 1) for i in range(len(labels) - 1)]
        return labels, edges
    if ktype.kind == "I*":
        n = ktype.n
        if n == 0:
            labels = [("leaf", 1), ("leaf", 2), ("center", 0), ("leaf", 3)]
            edges = [(0, 2), (1, 2), (2, 3)]
            return labels, edges
        labels = [("far", 1), ("far", 2)] + [("spine", i) for i in range(n + 1)] + [("near", 0)]
        edges = [(0, 2), (1, 2)]
        for i in range(n):
            edges.append((2 + i, 3 + i))
        edges.append((2 + n, 3 + n))
        return labels, edges
    if ktype.kind == "IV*":
        # Bourbaki E6: chain 1-3-4-5-6 with 2 attached to 4
        labels = [("E6", i) for i in range(1, 7)]
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        return labels, edges
    if ktype.kind == "III*":
        labels = [("E7", i) for i in range(1, 8)]
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)]
        return labels, edges
    if ktype.kind == "III":
        return [("A1", 1)], []
    if ktype.kind == "IV":
        return [("A2", 1), ("A2", 2)], [(0, 1)]
    raise ValueError(f"no component block for {ktype}")


def assemble_ns(model: WModel, config: FiberConfig, basis: list[dict], sections: dict[str, SectionPt], hints=None):
    """Gram matrix of NS in a caller-specified basis.

    ``basis`` entries are dicts:  {"kind": "zero"|"fiber"},
    {"kind": "component", "place": Place, "index": i}  (1-based within the
    fiber block), or {"kind": "section", "name": ...,
    "components": {place_repr: index or 0}} giving the component of the
    fiber block the section meets (0 = identity component, entry omitted =
    identity).  Component hits are cross-checked against computed classes
    where the class is determined (cycle fibers), and against
    identity/non-identity everywhere.
    """
    ctx = HeightContext(model, list(sections.values()), config=config, hints=hints)
    n = len(basis)
    M = [[0] * n for _ in range(n)]
    env_by_place = {repr(env.place): env for env in ctx.envs}
    blocks = {repr(env.place): _fiber_block(env.kodaira) for env in ctx.envs}

    sec_names = list(sections)
    sec_objs = {nm: lift_section(sections[nm], ctx.field) for nm in sec_names}
    po = {nm: intersect_zero(ctx.model, sec_objs[nm]) for nm in sec_names}
    classes: dict[str, dict[str, ComponentClass]] = {}
    for pr, env in env_by_place.items():
        cl = resolve_fiber_classes(ctx.model, env, [sec_objs[nm] for nm in sec_names], hints=(hints or {}).get(pr), arith=ctx.arith)
        classes[pr] = dict(zip(sec_names, cl))

    def entry(i, j):
        bi, bj = basis[i], basis[j]
        ki, kj = bi["kind"], bj["kind"]
        if ki > kj:
            bi, bj = bj, bi
            ki, kj = kj, ki
        # ordering: component < fiber < section < zero (lexicographic on kind)
        if ki == kj == "zero":
            return -CHI
        if {ki, kj} == {"zero", "fiber"}:
            return 1
        if ki == kj == "fiber":
            return 0
        if {ki, kj} == {"fiber", "section"}:
            return 1
        if {ki, kj} == {"component", "fiber"}:
            return 0
        if {ki, kj} == {"component", "zero"}:
            return 0
        if {ki, kj} == {"section", "zero"}:
            nm = (bi if bi["kind"] == "section" else bj)["name"]
            return po[nm]
        if ki == kj == "component":
            if repr(bi["place"]) != repr(bj["place"]) or bi.get("conj", 0) != bj.get("conj", 0):
                return 0
            labels, edges = blocks[repr(bi["place"])]
            a, b = bi["index"] - 1, bj["index"] - 1
            if a == b:
                return -2
            return 1 if (a, b) in edges or (b, a) in edges else 0
        if {ki, kj} == {"component", "section"}:
            comp = bi if bi["kind"] == "component" else bj
            sec = bj if bj["kind"] == "section" else bi
            hit = sec.get("components", {}).get(repr(comp["place"]), 0)
            return 1 if hit == comp["index"] else 0
        if ki == kj == "section":
            ni, nj = bi["name"], bj["name"]
            if ni == nj:
                return -2
            return ctx.sections_intersection(sec_objs[ni], sec_objs[nj])
        raise ValueError(f"unexpected basis pair {ki}, {kj}")

    # consistency of declared component hits with the computed classes
    for b in basis:
        if b["kind"] != "section":
            continue
        nm = b["name"]
        for pr, env in env_by_place.items():
            declared = b.get("components", {}).get(pr, 0)
            computed = classes[pr][nm]
            if (declared == 0) != computed.is_identity():
                raise ArithmeticError(
                    f"declared component {declared} for {nm} at {pr} conflicts with computed {computed}"
                )
            if computed.kind == "I" and declared != 0:
                labels, _ = blocks[pr]
                lab = labels[declared - 1]
                if lab[1] not in (computed.label, computed.n - computed.label):
                    raise ArithmeticError(
                        f"{nm} at {pr}: declared cycle index {lab[1]}, computed {computed.label}"
                    )

    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = int(entry(i, j))
    return M
