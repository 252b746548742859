"""Canonical printing of scalars, polynomials and rational functions.

The emitted strings use exactly the grammar accepted by the parser, so a
print-then-parse round trip is the identity up to normalization.
"""
from __future__ import annotations

from fractions import Fraction

from .fields import TowerElem, squarefree_decompose


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _radical_token(d: int) -> str:
    if d == -1:
        return "i"
    return f"sqrt({d})"


def format_scalar(x) -> str:
    """One scalar as a sum of rational multiples of radical basis vectors."""
    if isinstance(x, (int, Fraction)):
        return format_fraction(Fraction(x))
    if isinstance(x, TowerElem):
        terms: list[tuple[Fraction, str]] = []
        for i, c in enumerate(x.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append((c, ""))
                continue
            m, d = squarefree_decompose(x.field.basis_radicand(i))
            terms.append((c * m, _radical_token(d)))
        if not terms:
            return "0"
        parts = []
        for j, (c, rad) in enumerate(terms):
            mag = abs(c)
            if not rad:
                body = format_fraction(mag)
            elif mag == 1:
                body = rad
            else:
                body = f"{format_fraction(mag)}*{rad}"
            if j == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)
    return repr(x)


def _scalar_is_negative_unit(s: str) -> bool:
    return s.startswith("-") and "+" not in s and "-" not in s[1:]


def _atom(s: str) -> str:
    """Parenthesize unless the string is a single positive token."""
    if any(op in s for op in "+-*/") and not (s.lstrip("-").isdigit() and s.count("-") <= 1):
        return f"({s})"
    return s


def format_poly(p) -> str:
    if p.is_zero():
        return "0"
    var = p.var
    parts: list[str] = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if c == p.field.zero:
            continue
        cs = format_scalar(c)
        if i == 0:
            mono = None
        elif i == 1:
            mono = var
        else:
            mono = f"{var}^{i}"
        sign = "+"
        if _scalar_is_negative_unit(cs) or (cs.startswith("-") and "+" not in cs[1:] and "-" not in cs[1:]):
            sign, cs = "-", cs[1:]
        if mono is None:
            body = f"({cs})" if ("+" in cs or "-" in cs) else cs
        elif cs == "1":
            body = mono
        else:
            head = f"({cs})" if ("+" in cs or "-" in cs or "/" in cs) else cs
            body = f"{head}*{mono}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign}{body}")
    return "".join(parts) if parts else "0"


def format_ratfn(r) -> str:
    num = format_poly(r.num)
    if r.den.is_constant():
        if r.den.constant_value() == r.den.field.one:
            return num
        return f"({num})/({format_scalar(r.den.constant_value())})"
    return f"({num})/({format_poly(r.den)})"
