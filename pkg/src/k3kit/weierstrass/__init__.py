"""Weierstrass models, Kodaira fibers, sections and coordinate changes."""
from .model import WModel, model_from_strings
from .points import (
    SectionPt,
    add,
    multiply,
    negate,
    on_curve,
    section_from_strings,
    subtract,
    torsion_check,
    torsion_order,
)
from .kodaira import (
    FiberConfig,
    FiberData,
    KodairaType,
    Place,
    ResidueRing,
    analyze_fibers,
    classify_triple,
    infinity_chart,
    kodaira_type_at,
    minimalize_at,
)
from .curvefield import CurveField, CurveFn, curve_equation_value
from .transform import (
    base_change,
    models_isomorphic,
    semantic_model_equal,
    short_form,
    verify_transformation,
)

__all__ = [
    "WModel",
    "model_from_strings",
    "SectionPt",
    "add",
    "multiply",
    "negate",
    "on_curve",
    "section_from_strings",
    "subtract",
    "torsion_check",
    "torsion_order",
    "FiberConfig",
    "FiberData",
    "KodairaType",
    "Place",
    "ResidueRing",
    "analyze_fibers",
    "classify_triple",
    "infinity_chart",
    "kodaira_type_at",
    "minimalize_at",
    "CurveField",
    "CurveFn",
    "curve_equation_value",
    "base_change",
    "models_isomorphic",
    "semantic_model_equal",
    "short_form",
    "verify_transformation",
]
