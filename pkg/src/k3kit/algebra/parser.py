"""Recursive-descent parser for exact arithmetic expressions.

Grammar (EBNF, whitespace ignored):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = { "+" | "-" } power ;
    power   = atom [ "^" integer ] ;
    atom    = integer | name | "sqrt" "(" expr ")" | "(" expr ")" ;
    integer = digit { digit } ;

``name`` is the main variable, ``i`` (a square root of -1), or one of the
extra symbols supplied by the caller (e.g. a symbolic parameter ``k``).
Values are exact: rationals, tower radicals and the variable combine into
a polynomial or rational function over the requested field.
"""
from __future__ import annotations

from fractions import Fraction

from .fields import QQ, squarefree_decompose
from .poly import Poly
from .ratfunc import FunctionField, RatFn


class ExprSyntaxError(ValueError):
    """Syntax or domain error, carrying the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_OPS = set("+-*/^()")


def _tokenize(src: str):
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str, variable: str, field=None, symbols=None, domain=None):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0
        self.variable = variable
        self.func = domain if domain is not None else FunctionField(field, variable)
        self.symbols = symbols or {}

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, at = self.next()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}, found {val!r}", at)

    def parse(self) -> RatFn:
        value = self.expr()
        kind, val, at = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing token {val!r}", at)
        return value

    def expr(self) -> RatFn:
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> RatFn:
        value = self.unary()
        while True:
            kind, val, at = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                if val == "/":
                    if rhs.is_zero():
                        raise ExprSyntaxError("division by zero", at)
                    value = value / rhs
                else:
                    value = value * rhs
            else:
                return value

    def unary(self) -> RatFn:
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                if val == "-":
                    sign = -sign
            else:
                break
        value = self.power()
        return value if sign == 1 else -value

    def power(self) -> RatFn:
        base = self.atom()
        kind, val, at = self.peek()
        if kind == "op" and val == "^":
            self.next()
            nsign = 1
            kind, val, at = self.peek()
            if kind == "op" and val == "-":
                self.next()
                nsign = -1
                kind, val, at = self.peek()
            if kind != "int":
                raise ExprSyntaxError("exponent must be an integer", at)
            self.next()
            e = nsign * int(val)
            if e < 0 and base.is_zero():
                raise ExprSyntaxError("zero to a negative power", at)
            return base ** e
        return base

    def atom(self) -> RatFn:
        kind, val, at = self.next()
        if kind == "int":
            return self.func.from_fraction(Fraction(int(val)))
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "name":
            if val == self.variable:
                return self.func.gen()
            if val == "sqrt":
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return self.radical(inner, at)
            if val == "i":
                return self.radical(self.func.from_fraction(Fraction(-1)), at)
            if val in self.symbols:
                return self.func.coerce(self.symbols[val])
            raise ExprSyntaxError(f"unknown symbol {val!r}", at)
        raise ExprSyntaxError(f"unexpected token {val!r}", at)

    def radical(self, inner, at: int):
        try:
            q = self.func.to_rational(inner)
        except (ValueError, TypeError):
            raise ExprSyntaxError("sqrt argument must be a rational constant", at) from None
        if q == 0:
            return self.func.from_fraction(Fraction(0))
        mn, dn = squarefree_decompose(q.numerator)
        md, dd = squarefree_decompose(q.denominator)
        rad = dn * dd
        scale = Fraction(mn, md * dd)
        if rad == 1:
            return self.func.from_fraction(scale)
        root = self.func.sqrt_of(rad)
        if root is None:
            raise ExprSyntaxError(
                f"sqrt({q}) lies outside the configured tower", at
            )
        return root * self.func.from_fraction(scale)


def parse_expr(src: str, variable: str = "t", field=QQ, symbols=None):
    """Parse into a Poly when the result is polynomial, otherwise a RatFn.

    ``field`` is the coefficient field (QQ, a Tower, or a FunctionField for
    symbolic parameters); ``symbols`` maps extra names to field elements.
    """
    value = _Parser(src, variable, field, symbols).parse()
    if value.is_poly():
        return value.as_poly()
    return value


def parse_ratfn(src: str, variable: str = "t", field=QQ, symbols=None) -> RatFn:
    """Parse, always returning a RatFn."""
    value = _Parser(src, variable, field, symbols).parse()
    return value

def parse_in_domain(src: str, domain, variable: str = "t", symbols=None):
    """Parse over an arbitrary domain object (e.g. a curve function field)."""
    return _Parser(src, variable, domain=domain, symbols=symbols).parse()
