"""Exact scalar, polynomial and rational-function arithmetic."""
from .fields import QQ, RationalField, Tower, TowerElem, common_field, squarefree_decompose, tower_mul
from .poly import NEG_INF, Poly, poly_gcd, poly_xgcd, squarefree_decomposition
from .ratfunc import FunctionField, RatFn, ratfn
from .parser import ExprSyntaxError, parse_expr, parse_ratfn
from .printer import format_poly, format_ratfn, format_scalar
from .factor import factor_over_field, factor_over_q, factor_squarefree_tower, roots_over_q

__all__ = [
    "QQ",
    "RationalField",
    "Tower",
    "TowerElem",
    "common_field",
    "squarefree_decompose",
    "tower_mul",
    "NEG_INF",
    "Poly",
    "poly_gcd",
    "poly_xgcd",
    "squarefree_decomposition",
    "FunctionField",
    "RatFn",
    "ratfn",
    "ExprSyntaxError",
    "parse_expr",
    "parse_ratfn",
    "format_poly",
    "format_ratfn",
    "format_scalar",
    "factor_over_field",
    "factor_over_q",
    "factor_squarefree_tower",
    "roots_over_q",
]
