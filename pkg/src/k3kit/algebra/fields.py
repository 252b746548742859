"""Exact coefficient fields: Q, quadratic/biquadratic radical towers, and helpers.

Every field is represented by a small context object exposing ``zero``,
``one``, ``from_fraction`` and ``coerce``; elements carry their own
arithmetic through operator overloading.  All arithmetic is exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = m^2 * d with d squarefree; return (m, d)."""
    if n == 0:
        return 1, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    m, d, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            m *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= n
    return m, sign * d


def fraction_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    mn, dn = squarefree_decompose(q.numerator)
    md, dd = squarefree_decompose(q.denominator)
    if dn != 1 or dd != 1:
        return None
    return Fraction(mn, md)


class RationalField:
    """The field Q; elements are fractions.Fraction."""

    radicals: tuple[int, ...] = ()

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def from_fraction(self, q) -> Fraction:
        return Fraction(q)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, TowerElem) and x.is_rational():
            return x.rational_part()
        raise TypeError(f"cannot coerce {x!r} into Q")

    def is_element(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def to_rational(self, x) -> Fraction:
        return self.coerce(x)

    def conjugates(self, x):
        return [self.coerce(x)]

    def adjoin_sqrt(self, d: int) -> "RationalField | Tower":
        _, d0 = squarefree_decompose(d)
        if d0 == 1:
            return self
        return Tower((d0,))

    def sqrt_of(self, d: int):
        m, d0 = squarefree_decompose(d)
        if d0 == 1:
            return Fraction(m)
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


class Tower:
    """Q adjoined with one or two square roots of distinct squarefree integers.

    Basis for two radicals (d1, d2): 1, sqrt(d1), sqrt(d2), sqrt(d1)*sqrt(d2);
    the last basis vector is the formal product, not reduced to a squarefree
    radicand.  Mixing elements of different towers is an error, never an
    implicit embedding.
    """

    def __init__(self, radicals: Sequence[int]):
        rads = tuple(radicals)
        if not 1 <= len(rads) <= 2:
            raise ValueError("tower supports one or two radicals")
        seen = set()
        for d in rads:
            _, d0 = squarefree_decompose(d)
            if d0 != d or d in (0, 1):
                raise ValueError(f"radicand {d} must be squarefree and != 0, 1")
            if d in seen:
                raise ValueError("tower radicands must be distinct")
            seen.add(d)
        self.radicals = rads
        self.dim = 1 << len(rads)
        # basis_mask[i] is the subset of radicals entering basis vector i
        self._zero = TowerElem(self, (Fraction(0),) * self.dim)
        self._one = TowerElem(self, (Fraction(1),) + (Fraction(0),) * (self.dim - 1))

    @property
    def zero(self) -> "TowerElem":
        return self._zero

    @property
    def one(self) -> "TowerElem":
        return self._one

    def from_fraction(self, q) -> "TowerElem":
        c = [Fraction(0)] * self.dim
        c[0] = Fraction(q)
        return TowerElem(self, tuple(c))

    def coerce(self, x) -> "TowerElem":
        if isinstance(x, TowerElem):
            if x.field == self:
                return x
            if x.is_rational():
                return self.from_fraction(x.rational_part())
            embedded = self._embed(x)
            if embedded is not None:
                return embedded
            raise TypeError(f"tower mismatch: {x.field} vs {self}")
        if isinstance(x, (int, Fraction)):
            return self.from_fraction(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def _embed(self, x: "TowerElem") -> "TowerElem | None":
        # embed a smaller tower whose radicals all live here
        coords = []
        for d in x.field.radicals:
            v = self.sqrt_of(d)
            if v is None:
                return None
            coords.append(v)
        result = self.from_fraction(x.coeffs[0])
        for i, v in enumerate(coords):
            result = result + v * self.from_fraction(x.coeffs[1 << i])
        if x.field.dim == 4:
            result = result + coords[0] * coords[1] * self.from_fraction(x.coeffs[3])
        return result

    def is_element(self, x) -> bool:
        return isinstance(x, (int, Fraction)) or (
            isinstance(x, TowerElem) and x.field == self
        )

    def to_rational(self, x) -> Fraction:
        e = self.coerce(x)
        if not e.is_rational():
            raise ValueError(f"{e} is not rational")
        return e.coeffs[0]

    def basis_radicand(self, i: int) -> int:
        """Radicand of basis vector i (formal product, may be non-squarefree)."""
        r = 1
        for bit, d in enumerate(self.radicals):
            if i >> bit & 1:
                r *= d
        return r

    def sqrt_of(self, d: int) -> "TowerElem | None":
        """An element whose square is d, or None if d is outside the tower."""
        m, d0 = squarefree_decompose(d)
        if d0 == 1:
            return self.from_fraction(m)
        for i in range(1, self.dim):
            mi, di = squarefree_decompose(self.basis_radicand(i))
            if di == d0:
                c = [Fraction(0)] * self.dim
                c[i] = Fraction(m, mi)
                return TowerElem(self, tuple(c))
        return None

    def adjoin_sqrt(self, d: int) -> "Tower":
        _, d0 = squarefree_decompose(d)
        if d0 == 1 or self.sqrt_of(d0) is not None:
            return self
        if len(self.radicals) >= 2:
            raise ValueError(
                f"cannot adjoin sqrt({d0}) to {self}: tower limit (two radicals)"
            )
        return Tower(self.radicals + (d0,))

    def conjugates(self, x) -> "list[TowerElem]":
        e = self.coerce(x)
        return [e.conjugate(mask) for mask in range(self.dim)]

    def random_element(self, rng) -> "TowerElem":
        return TowerElem(
            self,
            tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(self.dim)),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Tower) and self.radicals == other.radicals

    def __hash__(self) -> int:
        return hash(("Tower", self.radicals))

    def __repr__(self) -> str:
        inner = ",".join(f"sqrt({d})" for d in self.radicals)
        return f"QQ({inner})"


class TowerElem:
    """Element of a radical tower, stored on the fixed power-product basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Tower, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self) -> Fraction:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce_other(self, other):
        if isinstance(other, TowerElem):
            if other.field != self.field:
                if other.is_rational():
                    return self.field.from_fraction(other.coeffs[0])
                if self.is_rational():
                    return NotImplemented
                raise TypeError(f"tower mismatch: {self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce_other(other)
        if o is None or o is NotImplemented:
            return NotImplemented
        return TowerElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce_other(other)
        if o is None or o is NotImplemented:
            return NotImplemented
        return TowerElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce_other(other)
        if o is None or o is NotImplemented:
            return NotImplemented
        dim = self.field.dim
        out = [Fraction(0)] * dim
        rad = self.field.radicals
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b == 0:
                    continue
                k = i ^ j
                scale = 1
                common = i & j
                for bit, d in enumerate(rad):
                    if common >> bit & 1:
                        scale *= d
                out[k] += a * b * scale
        return TowerElem(self.field, tuple(out))

    __rmul__ = __mul__

    def conjugate(self, mask: int) -> "TowerElem":
        """Apply the Galois map negating sqrt(d_i) for each bit set in mask."""
        out = []
        for i, c in enumerate(self.coeffs):
            parity = bin(i & mask).count("1") & 1
            out.append(-c if parity else c)
        return TowerElem(self.field, tuple(out))

    def norm(self) -> Fraction:
        """Norm down to Q (product of all conjugates)."""
        prod = self.field.one
        for mask in range(self.field.dim):
            prod = prod * self.conjugate(mask)
        assert prod.is_rational()
        return prod.coeffs[0]

    def inverse(self) -> "TowerElem":
        if self.is_zero():
            raise ZeroDivisionError("tower element is zero")
        prod = self.field.one
        for mask in range(1, self.field.dim):
            prod = prod * self.conjugate(mask)
        n = (self * prod).coeffs[0]
        return TowerElem(self.field, tuple(c / n for c in prod.coeffs))

    def __truediv__(self, other):
        o = self._coerce_other(other)
        if o is None or o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce_other(other)
        if o is None or o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, TowerElem):
            if other.field == self.field:
                return self.coeffs == other.coeffs
            if self.is_rational() and other.is_rational():
                return self.coeffs[0] == other.coeffs[0]
            return False
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.radicals, self.coeffs))

    def __repr__(self) -> str:
        from .printer import format_scalar

        return format_scalar(self)


def tower_mul(a: TowerElem, b: TowerElem) -> TowerElem:
    """Exact product of two elements of the same tower."""
    if not isinstance(a, TowerElem) or not isinstance(b, TowerElem):
        raise TypeError("tower_mul expects tower elements")
    if a.field != b.field:
        raise TypeError(f"tower mismatch: {a.field} vs {b.field}")
    return a * b


def common_field(*fields):
    """Smallest of our fields containing all the given ones."""
    from .ratfunc import FunctionField

    func_vars: list[str] = []
    scalars = []
    stack = list(fields)
    while stack:
        f = stack.pop()
        if isinstance(f, FunctionField):
            if f.var not in func_vars:
                func_vars.append(f.var)
            stack.append(f.base)
        else:
            scalars.append(f)
    result = QQ
    for f in scalars:
        if isinstance(f, RationalField):
            continue
        if isinstance(f, Tower):
            if isinstance(result, RationalField):
                result = f
            elif result != f:
                for d in f.radicals:
                    result = result.adjoin_sqrt(d)
        else:
            raise TypeError(f"unsupported field {f!r}")
    for var in sorted(func_vars):
        result = FunctionField(result, var)
    return result
