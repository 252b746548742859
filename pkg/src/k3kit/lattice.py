"""Integer lattices: Smith normal form, discriminant forms, isometry tests.

The discriminant group of a nondegenerate Gram matrix A comes out of the
Smith normal form U A V = D: the group is the direct sum of Z/d_i for the
nontrivial elementary divisors, generated by the rows of V^{-1} read in the
dual basis.  q-values live in Q/2Z (stored in [0, 2)), b-values in Q/Z
(stored in [0, 1)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, isqrt


Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k in range(m):
            a = Ai[k]
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(p):
                    row[j] += a * Bk[j]
    return out


def mat_fraction(A) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in A]


def mat_fraction_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            a = A[i][k]
            if a:
                for j in range(p):
                    out[i][j] += a * B[k][j]
    return out


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def fraction_matrix_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return [row[n:] for row in M]


def det_int(A: Matrix) -> int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(A)
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """(U, D, V) with U A V = D diagonal, d_i | d_{i+1}, U, V unimodular.

    Pivoting picks the smallest nonzero entry by absolute value; exact
    arbitrary-precision arithmetic throughout (intermediate growth is real
    on 20x20 Gram matrices).
    """
    n = len(A)
    m = len(A[0]) if n else 0
    D = [row[:] for row in A]
    U = _identity(n)
    V = _identity(m)

    def row_op(i, j, c):  # row_i += c*row_j
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, c):  # col_i += c*col_j
        for r in range(n):
            D[r][i] += c * D[r][j]
        for r in range(m):
            V[r][i] += c * V[r][j]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(n):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    size = min(n, m)
    for k in range(size):
        while True:
            piv = None
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    v = abs(D[i][j])
                    if v and (best is None or v < best):
                        best, piv = v, (i, j)
            if piv is None:
                break
            pi, pj = piv
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            # clear column k
            dirty = False
            for i in range(k + 1, n):
                if D[i][k]:
                    q = D[i][k] // D[k][k]
                    row_op(i, k, -q)
                    if D[i][k]:
                        dirty = True
            for j in range(k + 1, m):
                if D[k][j]:
                    q = D[k][j] // D[k][k]
                    col_op(j, k, -q)
                    if D[k][j]:
                        dirty = True
            if dirty:
                continue
            # ensure divisibility of the remaining block
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, m):
                    if D[i][j] % D[k][k]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(k, offender, 1)
        if k < n and k < m and D[k][k] < 0:
            for j in range(m):
                D[k][j] = -D[k][j]
            for j in range(n):
                U[k][j] = -U[k][j]
    return U, D, V


@dataclass
class DiscGroup:
    """Finite discriminant group with its torsion form data.

    orders: nontrivial elementary divisors d_1 | d_2 | ...;
    gens: generator vectors in the dual basis (rows of V^{-1});
    q: values q(g_i) in [0, 2) (even lattices only, else None);
    b: matrix of b(g_i, g_j) in [0, 1).
    """

    orders: tuple[int, ...]
    gens: list[list[Fraction]]
    q: list[Fraction] | None
    b: list[list[Fraction]]

    @property
    def size(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def elements(self):
        """All elements as coefficient tuples (c_1, ..., c_r) mod orders."""
        ranges = [range(d) for d in self.orders]
        return itertools.product(*ranges)

    def elem_order(self, coeffs) -> int:
        o = 1
        for c, d in zip(coeffs, self.orders):
            if c:
                o = o * (d // gcd(c, d)) // gcd(o, d // gcd(c, d))
        return o

    def q_of(self, coeffs) -> Fraction:
        """q(sum c_i g_i) via the quadratic form rules; exact in [0, 2)."""
        total = Fraction(0)
        for i, ci in enumerate(coeffs):
            if ci:
                total += ci * ci * self.q[i]
                for j in range(i + 1, len(coeffs)):
                    if coeffs[j]:
                        total += 2 * ci * coeffs[j] * self.b[i][j]
        return total % 2

    def b_of(self, c1, c2) -> Fraction:
        total = Fraction(0)
        for i, a in enumerate(c1):
            if a:
                for j, c in enumerate(c2):
                    if c:
                        total += a * c * self.b[i][j]
        return total % 1


def disc_form(gram: Matrix, require_even: bool = True) -> DiscGroup:
    """Discriminant group and torsion forms from an integer Gram matrix."""
    n = len(gram)
    for i in range(n):
        for j in range(n):
            if gram[i][j] != gram[j][i]:
                raise ValueError("Gram matrix must be symmetric")
    even = all(gram[i][i] % 2 == 0 for i in range(n))
    if require_even and not even:
        raise ValueError("q-values need an even lattice")
    U, D, V = smith_normal_form(gram)
    det = 1
    for i in range(n):
        det *= D[i][i]
    if det == 0:
        raise ValueError("degenerate lattice")
    Vinv = fraction_matrix_inverse(mat_fraction(V))
    Ainv = fraction_matrix_inverse(mat_fraction(gram))
    orders = []
    gens = []
    for i in range(n):
        d = abs(D[i][i])
        if d > 1:
            orders.append(d)
            # row of V^{-1} is in dual coordinates; convert to coordinates
            # in L (x) Q so that q(g) is the plain value g A g^t
            primal = [sum(Vinv[i][k] * Ainv[k][c] for k in range(n)) for c in range(n)]
            gens.append(primal)
    # sort by order ascending, keeping the SNF divisibility chain
    pairs = sorted(zip(orders, gens), key=lambda t: t[0])
    orders = tuple(p[0] for p in pairs)
    gens = [p[1] for p in pairs]
    G = mat_fraction(gram)
    qs: list[Fraction] | None = [] if even else None
    bmat = [[Fraction(0)] * len(gens) for _ in gens]
    for i, gi in enumerate(gens):
        Gi = [sum(G[r][c] * gi[c] for c in range(n)) for r in range(n)]
        for j, gj in enumerate(gens):
            val = sum(Gi[c] * gj[c] for c in range(n))
            bmat[i][j] = val % 1
        if even:
            qii = sum(Gi[c] * gi[c] for c in range(n))
            qs.append(qii % 2)
    return DiscGroup(orders=orders, gens=gens, q=qs, b=bmat)


def disc_group_of_diagonal(entries: list[int]) -> DiscGroup:
    return disc_form([[entries[i] if i == j else 0 for j in range(len(entries))] for i in range(len(entries))])


def disc_forms_match(G1: DiscGroup, G2: DiscGroup, sign: int = 1, limit: int = 10_000):
    """Group isomorphism matching q up to ``sign`` (and b accordingly).

    Brute force over generator images, pruned by element order and q-value;
    returns the image tuples or None.  Group orders stay below ``limit``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if G1.size != G2.size:
        return None
    if G1.size > limit:
        raise ValueError(f"group order {G1.size} exceeds the search limit")
    if G1.q is None or G2.q is None:
        raise ValueError("q-values are required for form matching")
    r = len(G1.orders)
    elements = list(G2.elements())
    by_order: dict[int, list] = {}
    for e in elements:
        by_order.setdefault(G2.elem_order(e), []).append(e)

    targets_q = [(sign * q) % 2 for q in (G1.q_of(_unit(r, i, G1.orders)) for i in range(r))]

    def backtrack(idx, chosen):
        if idx == r:
            if _spans(G2, chosen):
                return list(chosen)
            return None
        want_order = G1.orders[idx]
        want_q = targets_q[idx]
        for cand in by_order.get(want_order, ()):
            if G2.q_of(cand) != want_q:
                continue
            ok = True
            for jdx, prev in enumerate(chosen):
                want_b = (sign * G1.b_of(_unit(r, jdx, G1.orders), _unit(r, idx, G1.orders))) % 1
                if G2.b_of(prev, cand) != want_b:
                    ok = False
                    break
            if not ok:
                continue
            chosen.append(cand)
            hit = backtrack(idx + 1, chosen)
            if hit is not None:
                return hit
            chosen.pop()
        return None

    return backtrack(0, [])


def _unit(r: int, i: int, orders) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(r))


def _spans(G: DiscGroup, chosen) -> bool:
    """Do the chosen elements generate the whole group?"""
    seen = {tuple([0] * len(G.orders))}
    frontier = [tuple([0] * len(G.orders))]
    gens = [tuple(c) for c in chosen]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((a + b) % d for a, b, d in zip(cur, g, G.orders))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == G.size


def verify_congruence(T1, T2, M) -> bool:
    """True iff M^t T2 M = T1 exactly (rational matrices)."""
    T1f, T2f, Mf = mat_fraction(T1), mat_fraction(T2), mat_fraction(M)
    n = len(Mf)
    det = _fraction_det(Mf)
    if det == 0:
        raise ValueError("M is singular")
    Mt = mat_transpose(Mf)
    return mat_fraction_mul(mat_fraction_mul(Mt, T2f), Mf) == T1f


def _fraction_det(A) -> Fraction:
    n = len(A)
    M = [row[:] for row in A]
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


def _prime_factors(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def bsv_criterion(T: Matrix, p: int) -> bool | str:
    """Rational-isometry criterion for a p-isogeny on the transcendental lattice.

    Even rank r: for p = 2, every prime q = 3, 5 (mod 8) must divide det T
    to an even power; for p > 2, primes q (> 2, != p) where p is a nonsquare
    must divide det T evenly, and res_p(det T) must equal
    (-1)^(p(p-1)/2 + v_p(det T)) modulo squares in F_p^*.
    Odd rank returns the distinct "no isometry" outcome.
    """
    r = len(T)
    if r % 2 == 1:
        return "no isometry"
    det = det_int(T)
    if det == 0:
        raise ValueError("degenerate lattice")
    facs = _prime_factors(det)
    if p == 2:
        for q, e in facs.items():
            if q % 8 in (3, 5) and e % 2 == 1:
                return False
        return True
    for q, e in facs.items():
        if q in (2, p):
            continue
        if e % 2 == 1 and _legendre(p, q) != 1:
            return False
    vp = facs.get(p, 0)
    res = det // p ** vp
    target = (-1) ** ((p * (p - 1)) // 2 + vp)
    return _legendre(res, p) == _legendre(target, p)
