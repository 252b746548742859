import json
from pathlib import Path

import pytest

from k3kit.algebra import parse_ratfn
from k3kit.catalog import load, validate


def test_full_corpus_size(catalog):
    assert len(catalog) >= 40


def test_entry_ids_unique_and_aliases_resolve(catalog):
    assert catalog.get("Et").id == "Thm3.2/E_t"
    assert catalog.get("Hw").id == "Y2/H_w"
    assert catalog.get("E19k2").id == "Y2/E_b"


def test_equation_strings_round_trip(catalog):
    for entry in catalog:
        if entry.tower_limit:
            continue
        field, symbols = entry.field_and_symbols()
        for key, src in entry.raw["coefficients"].items():
            v = parse_ratfn(src, variable=entry.variable, field=field, symbols=symbols)
            again = parse_ratfn(repr(v), variable=entry.variable, field=field, symbols=symbols)
            assert again == v, (entry.id, key)


def test_empty_directory_loads_empty(tmp_path):
    cat = load(tmp_path)
    assert len(cat) == 0


def test_schema_version_enforced(tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps({"schema_version": 99, "entries": []}))
    with pytest.raises(Exception, match="schema_version"):
        load(tmp_path)


def test_validate_thm32_entry(catalog):
    rep = validate(catalog.get("Thm3.2/E_t"), catalog)
    assert rep["ok"], rep
    names = [c["name"] for c in rep["checks"]]
    assert any("fibers" in n for n in names)
    assert any("isogeny" in n for n in names)


def test_fiber_entry_count_for_regression(catalog):
    with_fibers = [e for e in catalog if e.expected_fibers() and not e.symbolic]
    assert len(with_fibers) >= 25


def test_every_expected_fiber_list_sums_to_24(catalog):
    from k3kit.weierstrass.kodaira import KodairaType

    for e in catalog:
        if not e.expected_fibers():
            continue
        total = sum(KodairaType.parse(g["type"]).euler * g.get("count", 1) for g in e.expected_fibers())
        assert total == 24, e.id


def test_catalog_discriminants_factor_and_reexpand(catalog):
    from k3kit.algebra import Poly, QQ, factor_over_q

    for eid in ("Thm3.2/E_t", "Table2/E20", "SelfIsog/E87", "Y2/E_c", "Y10/H_11"):
        model = catalog.get(eid).model()
        delta = model.disc.as_poly()
        if model.field != QQ:
            continue
        content, facs = factor_over_q(delta)
        prod = Poly(QQ, delta.var, [content])
        for f, m in facs:
            prod = prod * f ** m
        assert prod == delta, eid
