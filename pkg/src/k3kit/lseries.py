"""Finite-field point counts and the trace sum A_p of a fibration.

A_p = -sum a_p(t) - sum eps_p(t) - sum_i (d_i/p) p, the first sum over
smooth fibers, the second over singular ones (eps = +1 split, -1 nonsplit,
0 additive), the last over the field discriminants of a generating set of
infinite sections.  Counting is a vectorized x-loop per fiber with a
quadratic-residue table: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .algebra.fields import QQ
from .algebra.poly import Poly
from .algebra.factor import factor_over_q
from .weierstrass.kodaira import infinity_chart
from .weierstrass.model import WModel


class BadPrime(ValueError):
    """The model does not reduce well at this prime."""


def descend_model_to_q(model: WModel) -> WModel:
    """Rebuild over Q a model whose tower coefficients are all rational."""
    if model.field == QQ:
        return model
    def down(r):
        return r.map_coefficients(lambda c: model.field.to_rational(c), field=QQ)
    try:
        coeffs = [down(a) for a in model.coefficients()]
    except (ValueError, TypeError) as exc:
        raise BadPrime("tower coefficients cannot be reduced; model must be over Q") from exc
    return WModel(QQ, model.var, *coeffs, name=model.name)


@dataclass
class FpPoly:
    """Dense residue coefficients of one coefficient polynomial."""

    p: int
    coeffs: tuple[int, ...]

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        out = np.zeros_like(ts)
        for c in reversed(self.coeffs):
            out = (out * ts + c) % self.p
        return out


def _poly_mod_p(poly: Poly, p: int) -> tuple[int, ...]:
    out = []
    for c in poly.coeffs:
        q = Fraction(c)
        if q.denominator % p == 0:
            raise BadPrime(f"denominator divisible by {p}")
        out.append(q.numerator * pow(q.denominator, -1, p) % p)
    return tuple(out)


@dataclass
class FpModel:
    """One affine chart of the fibration reduced mod p (plus Delta)."""

    p: int
    b2: FpPoly
    b4: FpPoly
    b6: FpPoly
    delta: FpPoly

    def f_coeffs_at(self, t0: int) -> tuple[int, int, int, int]:
        """Coefficients (4, b2, 2 b4, b6) of the x-cubic at t = t0."""
        p = self.p
        ts = np.array([t0], dtype=np.int64)
        return (
            4 % p,
            int(self.b2.eval_many(ts)[0]),
            2 * int(self.b4.eval_many(ts)[0]) % p,
            int(self.b6.eval_many(ts)[0]),
        )


def _chart_to_fp(model: WModel, p: int) -> FpModel:
    if model.field != QQ:
        raise BadPrime("tower coefficients cannot be reduced; model must be over Q")
    coeffs = []
    for a in (model.b2, model.b4, model.b6, model.disc):
        if not a.is_poly():
            raise BadPrime("model is not integral")
        coeffs.append(FpPoly(p, _poly_mod_p(a.as_poly(), p)))
    return FpModel(p, *coeffs)


@dataclass
class ReducedSurface:
    """Both charts of a fibration mod p."""

    p: int
    affine: FpModel
    at_infinity: FpModel  # chart around t = infinity; only s = 0 is used

    @property
    def chi_table(self) -> np.ndarray:
        tbl = getattr(self, "_chi", None)
        if tbl is None:
            p = self.p
            tbl = np.full(p, -1, dtype=np.int64)
            tbl[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
            tbl[0] = 0
            self._chi = tbl
        return tbl


def reduce_mod_p(model: WModel, p: int) -> ReducedSurface:
    """Exact reduction of an integral model; p > 3 and good denominators."""
    if p <= 3:
        raise BadPrime("p must exceed 3")
    model = descend_model_to_q(model)
    work = model if model.is_integral() else model.integral_model()[0]
    affine = _chart_to_fp(work, p)
    if all(c == 0 for c in affine.delta.coeffs):
        raise BadPrime("Delta vanishes identically mod p")
    chart, _ = infinity_chart(work)
    inf = _chart_to_fp(chart, p)
    return ReducedSurface(p, affine, inf)


def is_good_prime(model: WModel, p: int) -> bool:
    """No denominator at p and the Delta root pattern survives reduction."""
    if p <= 3:
        return False
    try:
        model = descend_model_to_q(model)
        work = model if model.is_integral() else model.integral_model()[0]
        delta = work.disc.as_poly()
        _, facs = factor_over_q(delta)
        radical = Poly.const(QQ, delta.var, Fraction(1))
        for q, _m in facs:
            radical = radical * q
        lead = Fraction(delta.leading())
        for poly in (radical,):
            for c in poly.coeffs:
                if Fraction(c).denominator % p == 0:
                    return False
        if lead.numerator % p == 0 or lead.denominator % p == 0:
            return False
        rad_p = _poly_mod_p(radical, p)
        if len(rad_p) - 1 != radical.degree:
            return False
        # squarefree mod p
        from .algebra.factor import _zm_deriv, _zm_gcd, _trim

        rp = _trim(list(rad_p))
        g = _zm_gcd(rp, _zm_deriv(rp, p), p)
        return len(g) == 1
    except BadPrime:
        return False


@dataclass
class FiberCount:
    t: int | str  # residue or "inf"
    count: int
    kind: str  # smooth | split | nonsplit | additive
    a_p: int  # p + 1 - count for smooth fibers, else 0
    eps: int


def _classify_singular(fc: tuple[int, int, int, int], p: int, chi: np.ndarray) -> tuple[str, int]:
    """Node/cusp analysis of f(x) = 4x^3 + c2 x^2 + c1 x + c0 mod p."""
    c3, c2, c1, c0 = fc
    # gcd(f, f') via small resultant-free Euclid on coefficient lists
    f = [c0, c1, c2, c3]
    fp = [c1 % p, 2 * c2 % p, 3 * c3 % p]

    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def pmod(a, b):
        a = a[:]
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and trim(a):
            if not a:
                break
            c = a[-1] * inv % p
            off = len(a) - len(b)
            for i, bc in enumerate(b):
                a[off + i] = (a[off + i] - c * bc) % p
            trim(a)
        return trim(a)

    a, b = trim(f[:]), trim(fp[:])
    while b:
        a, b = b, pmod(a, b)
    g = a
    if len(g) == 1:
        raise ArithmeticError("fiber declared singular but cubic is squarefree")
    if len(g) == 3:  # (x - x0)^2: triple root of f
        return "additive", 0
    x0 = -g[0] * pow(g[1], -1, p) % p
    # f = lc (x - x0)^2 (x - x1): sum of roots = -c2/c3
    s = -c2 * pow(c3, -1, p) % p
    x1 = (s - 2 * x0) % p
    if x0 == x1:
        return "additive", 0
    cone = (x0 - x1) % p
    if chi[cone] == 1:
        return "split", 1
    return "nonsplit", -1


def count_fiber(surface: ReducedSurface, t0) -> FiberCount:
    """Projective point count of the fiber at t0 (t0 = "inf" for infinity)."""
    p = surface.p
    chart = surface.at_infinity if t0 == "inf" else surface.affine
    tval = 0 if t0 == "inf" else int(t0) % p
    ts = np.array([tval], dtype=np.int64)
    b2v = int(chart.b2.eval_many(ts)[0])
    b4v = int(chart.b4.eval_many(ts)[0])
    b6v = int(chart.b6.eval_many(ts)[0])
    dv = int(chart.delta.eval_many(ts)[0])
    xs = np.arange(p, dtype=np.int64)
    fvals = (((4 * xs % p * xs % p + b2v * xs) % p + 2 * b4v) * xs + b6v) % p
    chi = surface.chi_table
    count = int(p + 1 + chi[fvals].sum())
    if dv % p != 0:
        return FiberCount(t0, count, "smooth", p + 1 - count, 0)
    kind, eps = _classify_singular((4 % p, b2v, (2 * b4v) % p, b6v), p, chi)
    return FiberCount(t0, count, kind, 0, eps)


@dataclass
class ApResult:
    p: int
    A_p: int
    smooth_sum: int  # sum of a_p(t) over smooth fibers
    eps_sum: int
    section_term: int
    fibers: list[FiberCount]
    partial_sections: bool = False

    @property
    def geometric_part(self) -> int:
        """-sum a_p - sum eps (the section-independent part)."""
        return -self.smooth_sum - self.eps_sum


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def compute_ap(model: WModel, p: int, ds: list[int] | None = None, partial: bool = False) -> ApResult:
    """A_p over t in P^1(F_p); ds are field discriminants of MW generators."""
    surface = reduce_mod_p(model, p)
    chi = surface.chi_table
    xs = np.arange(p, dtype=np.int64)
    ts = np.arange(p, dtype=np.int64)
    b2 = surface.affine.b2.eval_many(ts)
    b4 = surface.affine.b4.eval_many(ts)
    b6 = surface.affine.b6.eval_many(ts)
    dv = surface.affine.delta.eval_many(ts)
    # (p x p) evaluation of the x-cubic for every t at once
    F = (4 * xs[None, :] % p * xs[None, :] % p * xs[None, :] + b2[:, None] * xs[None, :] ** 2 + (2 * b4[:, None]) * xs[None, :] + b6[:, None]) % p
    counts = p + 1 + chi[F].sum(axis=1)
    fibers: list[FiberCount] = []
    smooth_sum = 0
    eps_sum = 0
    for t0 in range(p):
        if dv[t0] % p:
            ap = int(p + 1 - counts[t0])
            fibers.append(FiberCount(t0, int(counts[t0]), "smooth", ap, 0))
            smooth_sum += ap
        else:
            kind, eps = _classify_singular(
                (4 % p, int(b2[t0]), 2 * int(b4[t0]) % p, int(b6[t0])), p, chi
            )
            fibers.append(FiberCount(t0, int(counts[t0]), kind, 0, eps))
            eps_sum += eps
    fc_inf = count_fiber(surface, "inf")
    fibers.append(fc_inf)
    smooth_sum += fc_inf.a_p
    eps_sum += fc_inf.eps
    section_term = 0
    if ds:
        section_term = sum(_legendre(d, p) * p for d in ds)
    return ApResult(
        p=p,
        A_p=-smooth_sum - eps_sum - section_term,
        smooth_sum=smooth_sum,
        eps_sum=eps_sum,
        section_term=section_term,
        fibers=fibers,
        partial_sections=partial or ds is None,
    )


@dataclass
class InvarianceReport:
    primes: list[int]
    rows: list[dict]
    pointwise_ok: bool
    all_equal: bool

    def table(self) -> str:
        lines = ["p\tA_p\tA_p'\tequal"]
        for row in self.rows:
            lines.append(f"{row['p']}\t{row['A_p']}\t{row['A_p_isog']}\t{row['equal']}")
        return "\n".join(lines)


def verify_invariance(
    model: WModel,
    other: WModel,
    ds: list[int] | None,
    ds2: list[int] | None,
    primes: list[int],
    jobs: int = 1,
    pointwise: bool = True,
) -> InvarianceReport:
    """Per-prime A_p comparison plus smooth-fiber a_p(t) matching."""
    good = [p for p in primes if is_good_prime(model, p) and is_good_prime(other, p)]
    partial = ds is None or ds2 is None

    def work(p: int) -> dict:
        r1 = compute_ap(model, p, ds, partial=partial)
        r2 = compute_ap(other, p, ds2, partial=partial)
        if partial:
            equal = r1.geometric_part == r2.geometric_part
        else:
            equal = r1.A_p == r2.A_p
        pw = True
        if pointwise:
            c1 = {f.t: f for f in r1.fibers}
            c2 = {f.t: f for f in r2.fibers}
            for t0, f1 in c1.items():
                f2 = c2[t0]
                if f1.kind == "smooth" and f2.kind == "smooth" and f1.a_p != f2.a_p:
                    pw = False
        return {
            "p": p,
            "A_p": r1.A_p if not partial else r1.geometric_part,
            "A_p_isog": r2.A_p if not partial else r2.geometric_part,
            "equal": equal,
            "pointwise": pw,
            "partial": partial,
        }

    if jobs > 1 and len(good) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_InvarianceWorker(model, other, ds, ds2, partial, pointwise), good))
    else:
        rows = [work(p) for p in good]
    rows.sort(key=lambda r: r["p"])
    return InvarianceReport(
        primes=good,
        rows=rows,
        pointwise_ok=all(r["pointwise"] for r in rows),
        all_equal=all(r["equal"] for r in rows),
    )


class _InvarianceWorker:
    """Picklable per-prime worker for the process pool."""

    def __init__(self, model, other, ds, ds2, partial, pointwise):
        self.model = model
        self.other = other
        self.ds = ds
        self.ds2 = ds2
        self.partial = partial
        self.pointwise = pointwise

    def __call__(self, p: int) -> dict:
        r1 = compute_ap(self.model, p, self.ds, partial=self.partial)
        r2 = compute_ap(self.other, p, self.ds2, partial=self.partial)
        if self.partial:
            equal = r1.geometric_part == r2.geometric_part
        else:
            equal = r1.A_p == r2.A_p
        pw = True
        if self.pointwise:
            c2 = {f.t: f for f in r2.fibers}
            for f1 in r1.fibers:
                f2 = c2[f1.t]
                if f1.kind == "smooth" and f2.kind == "smooth" and f1.a_p != f2.a_p:
                    pw = False
        return {
            "p": p,
            "A_p": r1.A_p if not self.partial else r1.geometric_part,
            "A_p_isog": r2.A_p if not self.partial else r2.geometric_part,
            "equal": equal,
            "pointwise": pw,
            "partial": self.partial,
        }


def primes_in_range(lo: int, hi: int) -> list[int]:
    sieve = bytearray([1] * (hi + 1))
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def bench_counting(model: WModel, p: int, repeats: int = 3) -> dict:
    """Throughput of the counting loop in fiber-point evaluations/second."""
    import time

    best = None
    evals = (p + 1) * p
    for _ in range(repeats):
        t0 = time.perf_counter()
        compute_ap(model, p, None, partial=True)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return {
        "p": p,
        "points": evals,
        "seconds": best,
        "evals_per_second": evals / best,
    }


# spec-facing alias
A_p = compute_ap
