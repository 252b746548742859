"""Exact-arithmetic toolkit for elliptic fibrations of K3 surfaces.

Kodaira fiber analysis, explicit 2-/3-isogenies, Mordell-Weil heights,
Neron-Severi and discriminant-form lattice arithmetic, and finite-field
point-counting invariance checks, all over exact coefficient fields.
"""
from .algebra import (
    QQ,
    Tower,
    TowerElem,
    FunctionField,
    Poly,
    RatFn,
    factor_over_q,
    parse_expr,
    parse_ratfn,
    tower_mul,
)
from .weierstrass import (
    WModel,
    SectionPt,
    analyze_fibers,
    base_change,
    kodaira_type_at,
    minimalize_at,
    model_from_strings,
    on_curve,
    section_from_strings,
    semantic_model_equal,
    torsion_check,
    verify_transformation,
)
from .isogeny import (
    IsogenyMap,
    KernelForm2,
    KernelForm3,
    cubic_model,
    push_point,
    three_isogeny,
    three_isogeny_normalized,
    three_isogeny_raw,
    to_kernel_form,
    two_isogeny,
)
from .lattice import (
    bsv_criterion,
    disc_form,
    disc_forms_match,
    smith_normal_form,
    verify_congruence,
)
from .mordell_weil import (
    HeightContext,
    assemble_ns,
    component_of,
    height,
    height_gram,
    intersect_zero,
    pairing,
    sections_intersection,
    shioda_tate_disc,
)
from .lseries import compute_ap, count_fiber, reduce_mod_p, verify_invariance
from . import catalog

__version__ = "0.1.0"
