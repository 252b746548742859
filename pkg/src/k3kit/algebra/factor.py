"""Polynomial factorization over Q and over radical towers.

Rational factorization runs squarefree decomposition (Yun), then for each
squarefree part a Zassenhaus round: factor modulo a good small prime with
Cantor-Zassenhaus, Hensel-lift the factors to a modulus beyond the
Landau-Mignotte bound, and recombine subsets by trial division over Z.
Degrees in this project stay below ~100, so no lattice reduction is needed.

Tower factorization reduces to the rational case with Trager's norm map.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt

from .fields import QQ, Tower, TowerElem
from .poly import Poly, poly_gcd, squarefree_decomposition

# ---------------------------------------------------------------------------
# dense integer polynomials modulo m (lists of ints, ascending degree)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _zm_add(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _zm_sub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _zm_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % m for c in out])


def _zm_divmod(a, b, m):
    """Division assuming lc(b) invertible mod m."""
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, m)
    rem = [c % m for c in a]
    dq = len(rem) - len(b)
    if dq < 0:
        return [], _trim(rem)
    quo = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = rem[k + len(b) - 1] * inv % m
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = (rem[k + j] - c * y) % m
    return _trim(quo), _trim(rem)


def _zm_gcd(a, b, p):
    a, b = [c % p for c in a], [c % p for c in b]
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _zm_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _zm_powmod(base, e, mod_poly, p):
    result = [1]
    base = _zm_divmod(base, mod_poly, p)[1]
    while e:
        if e & 1:
            result = _zm_divmod(_zm_mul(result, base, p), mod_poly, p)[1]
        base = _zm_divmod(_zm_mul(base, base, p), mod_poly, p)[1]
        e >>= 1
    return result


def _zm_deriv(a, p):
    return _trim([a[i] * i % p for i in range(1, len(a))])


# ---------------------------------------------------------------------------
# factorization mod p (distinct degree + Cantor-Zassenhaus splitting)
# ---------------------------------------------------------------------------


def _factor_mod_p(f: list[int], p: int, rng: random.Random) -> list[list[int]]:
    """Factor a monic squarefree polynomial mod p into monic irreducibles."""
    factors: list[list[int]] = []
    # distinct-degree pass
    dd: list[tuple[list[int], int]] = []
    h = [0, 1]
    g = f[:]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _zm_powmod(h, p, g, p)
        sub = _zm_sub(h, [0, 1], p)
        gd = _zm_gcd(sub, g, p)
        if len(gd) > 1:
            dd.append((gd, d))
            g, _ = _zm_divmod(g, gd, p)
            h = _zm_divmod(h, g, p)[1]
    if len(g) > 1:
        dd.append((g, len(g) - 1))
    # equal-degree splitting
    for prod, d in dd:
        work = [prod]
        while work:
            cur = work.pop()
            if len(cur) - 1 == d:
                factors.append(cur)
                continue
            while True:
                a = [rng.randrange(p) for _ in range(len(cur) - 1)]
                a = _trim(a)
                if len(a) < 1:
                    continue
                b = _zm_powmod(a, (p ** d - 1) // 2, cur, p)
                b = _zm_sub(b, [1], p)
                g1 = _zm_gcd(b, cur, p)
                if 1 < len(g1) < len(cur):
                    g2, _ = _zm_divmod(cur, g1, p)
                    work.append(g1)
                    work.append(g2)
                    break
    factors.sort(key=lambda q: (len(q), q))
    return factors


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def _xgcd_mod_p(a, b, p):
    r0, r1 = [c % p for c in a], [c % p for c in b]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    r0, r1 = _trim(r0), _trim(r1)
    while r1:
        q, r = _zm_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _zm_sub(s0, _zm_mul(q, s1, p), p)
        t0, t1 = t1, _zm_sub(t0, _zm_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return ([c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: from f=gh, sg+th=1 (mod m) to the same mod m^2."""
    m2 = m * m
    e = _zm_sub(f, _zm_mul(g, h, m2), m2)
    q, r = _zm_divmod(_zm_mul(s, e, m2), h, m2)
    g1 = _zm_add(_zm_add(g, _zm_mul(t, e, m2), m2), _zm_mul(q, g, m2), m2)
    h1 = _zm_add(h, r, m2)
    b = _zm_sub(_zm_add(_zm_mul(s, g1, m2), _zm_mul(t, h1, m2), m2), [1], m2)
    c, d = _zm_divmod(_zm_mul(s, b, m2), h1, m2)
    s1 = _zm_sub(s, d, m2)
    t1 = _zm_sub(_zm_sub(t, _zm_mul(t, b, m2), m2), _zm_mul(c, g1, m2), m2)
    return g1, h1, s1, t1


def _hensel_lift_pair(f, g, h, p, target):
    g, h, s0, t0 = g[:], h[:], *(_xgcd_mod_p(g, h, p)[1:])
    m = p
    while m < target:
        g, h, s0, t0 = _hensel_step(f, g, h, s0, t0, m)
        m = m * m
    return g, h


def _hensel_tree(f, factors, p, target):
    """Lift f = prod(factors) mod p to mod >= target; f monic."""
    if len(factors) == 1:
        return [[c % target for c in f]]
    mid = len(factors) // 2
    g = [1]
    for q in factors[:mid]:
        g = _zm_mul(g, q, p)
    h = [1]
    for q in factors[mid:]:
        h = _zm_mul(h, q, p)
    G, H = _hensel_lift_pair(f, g, h, p, target)
    return _hensel_tree(G, factors[:mid], p, target) + _hensel_tree(H, factors[mid:], p, target)


# ---------------------------------------------------------------------------
# integer polynomial helpers
# ---------------------------------------------------------------------------


def _z_content(a: list[int]) -> int:
    c = 0
    for x in a:
        c = gcd(c, x)
    return c or 1


def _z_primitive(a: list[int]) -> tuple[int, list[int]]:
    c = _z_content(a)
    if a and a[-1] < 0:
        c = -c
    return c, [x // c for x in a]


def _z_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _z_divmod_exact(a, b):
    """Exact division in Z[x], or None when b does not divide a."""
    if not b:
        return None
    rem = a[:]
    dq = len(rem) - len(b)
    if dq < 0:
        return None
    quo = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        lead = rem[k + len(b) - 1]
        if lead % b[-1]:
            return None
        c = lead // b[-1]
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    if any(rem):
        return None
    return quo


def _symmetric(a: list[int], m: int) -> list[int]:
    half = m // 2
    return _trim([c - m if c > half else c for c in (x % m for x in a)])


_ZASSENHAUS_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113]


def _factor_squarefree_int(f: list[int]) -> list[list[int]]:
    """Factor a primitive squarefree integer polynomial, positive leading."""
    n = len(f) - 1
    if n <= 0:
        return []
    if n == 1:
        return [f]
    lc = f[-1]
    # monicize: F(x) = lc^(n-1) f(x/lc); the leading coefficient becomes 1
    F = [f[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    # pick a good prime keeping the modular factor count small
    candidates = []
    for p in _ZASSENHAUS_PRIMES:
        fp = _trim([c % p for c in F])
        if len(fp) - 1 != n:
            continue
        if len(_zm_gcd(fp, _zm_deriv(fp, p), p)) != 1:
            continue
        rng = random.Random(hash((p, tuple(F))) & 0xFFFFFFFF)
        mods = _factor_mod_p(fp, p, rng)
        candidates.append((len(mods), p, mods))
        if len(candidates) >= 3:
            break
    if not candidates:
        raise ArithmeticError("no good prime found for factorization")
    _, p, mods = min(candidates, key=lambda c: c[0])
    if len(mods) == 1:
        return [f]
    # Landau-Mignotte style bound for coefficients of monic divisors of F
    height = max(abs(c) for c in F)
    bound = (isqrt(n + 1) + 1) * (1 << n) * height
    target = 2 * bound + 1
    lifted = _hensel_tree([c % _pow_at_least(p, target) for c in F], mods, p, _pow_at_least(p, target))
    modulus = _pow_at_least(p, target)

    remaining = list(range(len(lifted)))
    result: list[list[int]] = []
    current = F[:]

    def try_subset(subset):
        prod = [1]
        for idx in subset:
            prod = _zm_mul(prod, lifted[idx], modulus)
        cand = _symmetric(prod, modulus)
        if not cand:
            return None
        quo = _z_divmod_exact(current, cand)
        if quo is None:
            return None
        return cand, quo

    size = 1
    while 2 * size <= len(remaining):
        found = True
        while found and 2 * size <= len(remaining):
            found = False
            for subset in _subsets(remaining, size):
                hit = try_subset(subset)
                if hit is not None:
                    cand, quo = hit
                    result.append(cand)
                    for idx in subset:
                        remaining.remove(idx)
                    current = quo
                    found = True
                    break
        size += 1
    if len(current) > 1:
        result.append(current)
    # map back from the monicized polynomial: factor of f is pp(G(lc*x))
    out = []
    for g in result:
        mapped = [g[i] * lc ** i for i in range(len(g))]
        _, prim = _z_primitive(mapped)
        out.append(prim)
    out.sort(key=lambda q: (len(q), q))
    check = [1]
    for q in out:
        check = _z_mul(check, q)
    cf, checkp = _z_primitive(check)
    assert checkp == _z_primitive(f)[1], "factor recombination failed verification"
    return out


def _pow_at_least(p: int, target: int) -> int:
    m = p
    while m < target:
        m *= m
    return m


def _subsets(items, size):
    from itertools import combinations

    return combinations(items, size)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def factor_over_q(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Factor over Q: returns (content, [(monic irreducible, multiplicity)]).

    content * prod(factor^mult) reproduces the input exactly.
    """
    if p.field != QQ:
        raise TypeError("factor_over_q expects rational coefficients")
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.is_constant():
        return p.constant_value(), []
    content = p.leading()
    out: list[tuple[Poly, int]] = []
    for part, mult in squarefree_decomposition(p):
        den = 1
        for c in part.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in part.coeffs]
        _, prim = _z_primitive(ints)
        for fac in _factor_squarefree_int(prim):
            q = Poly(QQ, p.var, [Fraction(c) for c in fac]).monic()
            out.append((q, mult))
    out.sort(key=lambda fm: (fm[0].degree, [str(c) for c in fm[0].coeffs]))
    return content, out


def roots_over_q(p: Poly) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities."""
    _, factors = factor_over_q(p)
    out = []
    for f, m in factors:
        if f.degree == 1:
            out.append((-f.coeffs[0], m))
    return out


def _tower_norm(f: Poly) -> Poly:
    field: Tower = f.field
    prod = None
    for mask in range(field.dim):
        conj = f.map_coefficients(lambda c, mask=mask: field.coerce(c).conjugate(mask))
        prod = conj if prod is None else prod * conj
    coeffs = []
    for c in prod.coeffs:
        e = field.coerce(c)
        if not e.is_rational():
            raise ArithmeticError("tower norm failed to land in Q")
        coeffs.append(e.rational_part())
    return Poly(QQ, f.var, coeffs)


def factor_squarefree_tower(f: Poly) -> list[Poly]:
    """Monic irreducible factors over a tower via Trager's norm trick."""
    field: Tower = f.field
    theta = field.coerce(0)
    for i in range(len(field.radicals)):
        c = [Fraction(0)] * field.dim
        c[1 << i] = Fraction(1)
        theta = theta + TowerElem(field, tuple(c))
    f = f.monic()
    x = Poly.gen(field, f.var)
    for shift in range(0, 40):
        shifted = f(x - theta * shift) if shift else f
        norm = _tower_norm(shifted)
        if poly_gcd(norm, norm.derivative()).is_constant():
            break
    else:
        raise ArithmeticError("no squarefree norm found (Trager)")
    _, qfactors = factor_over_q(norm)
    out = []
    for qf, _ in qfactors:
        lifted = qf.map_coefficients(field.from_fraction, field=field)
        g = poly_gcd(shifted, lifted)
        if g.is_constant():
            continue
        if shift:
            g = g(x + theta * shift)
        out.append(g.monic())
    prod = Poly.const(field, f.var, field.one)
    for g in out:
        prod = prod * g
    assert prod == f, "Trager factorization failed verification"
    out.sort(key=lambda q: (q.degree, str(q)))
    return out


def factor_over_field(p: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Factor over the polynomial's own coefficient field (Q or a tower)."""
    if p.field == QQ:
        return factor_over_q(p)
    if isinstance(p.field, Tower):
        if p.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        if p.is_constant():
            return p.constant_value(), []
        content = p.leading()
        out: list[tuple[Poly, int]] = []
        for part, mult in squarefree_decomposition(p):
            rational = all(p.field.coerce(c).is_rational() for c in part.coeffs)
            if rational:
                qpart = Poly(QQ, p.var, [p.field.coerce(c).rational_part() for c in part.coeffs])
                _, qf = factor_over_q(qpart)
                for g, m in qf:
                    glift = g.map_coefficients(p.field.from_fraction, field=p.field)
                    for piece in factor_squarefree_tower(glift):
                        out.append((piece, mult * m))
            else:
                for piece in factor_squarefree_tower(part):
                    out.append((piece, mult))
        return content, out
    raise TypeError(f"factorization over {p.field} is not supported")


# conventional alias
factor_over_Q = factor_over_q
