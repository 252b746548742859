"""Machine-readable corpus of fibrations, sections and expected results.

Entries live in JSON files under ``k3kit/data`` (one file per source
section, schema_version mandatory).  Coefficients and section coordinates
are expression strings so the corpus stays diffable and auditable; every
expectation is checked by exactly one library operation in ``validate``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra.fields import QQ, Tower
from .algebra.parser import parse_expr, parse_ratfn
from .algebra.ratfunc import FunctionField
from .weierstrass.kodaira import FiberConfig, FiberData, KodairaType, Place, analyze_fibers, kodaira_type_at
from .weierstrass.model import WModel, model_from_strings
from .weierstrass.points import SectionPt, on_curve, section_from_strings, torsion_order

SCHEMA_VERSION = 1
DATA_FILES = ["sec3.json", "sec4.json", "sec5.json"]


class CatalogError(ValueError):
    def __init__(self, entry_id: str, field: str, message: str):
        super().__init__(f"[{entry_id}] {field}: {message}")
        self.entry_id = entry_id
        self.field = field


@dataclass
class CatalogEntry:
    id: str
    raw: dict
    source: str = ""
    aliases: tuple[str, ...] = ()

    @property
    def variable(self) -> str:
        return self.raw.get("variable", "t")

    @property
    def symbolic(self) -> bool:
        return bool(self.raw.get("params"))

    @property
    def tower_limit(self) -> bool:
        return bool(self.raw.get("tower_limit"))

    def field_and_symbols(self):
        tower = self.raw.get("tower")
        field = Tower(tuple(tower)) if tower else QQ
        symbols = {}
        for name in self.raw.get("params") or []:
            field = FunctionField(field, name)
        f = field
        while isinstance(f, FunctionField):
            symbols[f.var] = f.gen()
            f = f.base
        return field, symbols

    def model(self) -> WModel:
        field, symbols = self.field_and_symbols()
        return model_from_strings(
            field, self.variable, self.raw["coefficients"], symbols=symbols, name=self.id
        )

    def expected_fibers(self):
        return self.raw.get("fibers")

    def sections(self) -> dict[str, SectionPt]:
        field, symbols = self.field_and_symbols()
        out = {}
        for spec in self.raw.get("sections", []):
            out[spec["name"]] = section_from_strings(
                field,
                self.variable,
                spec["x"],
                spec["y"],
                symbols=symbols,
                field_disc=spec.get("field_disc", 1),
                name=spec["name"],
            )
        return out

    def torsion_points(self) -> list[tuple[SectionPt, int]]:
        field, symbols = self.field_and_symbols()
        out = []
        for spec in self.raw.get("torsion", {}).get("points", []):
            P = section_from_strings(
                field, self.variable, spec["x"], spec["y"], symbols=symbols, name=spec.get("name", "")
            )
            out.append((P, spec["order"]))
        return out


@dataclass
class Catalog:
    entries: dict[str, CatalogEntry]
    lattices: dict
    by_alias: dict[str, str]
    lattices_doc: dict = dc_field(default_factory=dict)

    def get(self, key: str) -> CatalogEntry:
        if key in self.entries:
            return self.entries[key]
        if key in self.by_alias:
            return self.entries[self.by_alias[key]]
        raise KeyError(f"no catalog entry {key!r}")

    def __iter__(self):
        return iter(sorted(self.entries.values(), key=lambda e: e.id))

    def __len__(self):
        return len(self.entries)


def _data_dir() -> Path:
    return Path(resources.files("k3kit").joinpath("data"))


def load(path: str | Path | None = None) -> Catalog:
    """Load the catalog from a directory of JSON files (default: packaged)."""
    base = Path(path) if path else _data_dir()
    entries: dict[str, CatalogEntry] = {}
    by_alias: dict[str, str] = {}
    lattices: dict = {}
    extras: dict = {}
    files = sorted(base.glob("*.json"))
    if not files:
        return Catalog({}, {}, {})
    for f in files:
        doc = json.loads(f.read_text())
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise CatalogError(f.name, "schema_version", f"expected {SCHEMA_VERSION}")
        if "lattices" in doc:
            lattices.update(doc["lattices"])
        for key in ("congruences", "bsv", "invariance", "ns_assembly"):
            if key in doc:
                extras.setdefault(key, {} if isinstance(doc[key], dict) else [])
                if isinstance(doc[key], dict):
                    extras[key].update(doc[key])
                else:
                    extras[key].extend(doc[key])
        for raw in doc.get("entries", []):
            eid = raw["id"]
            if eid in entries:
                raise CatalogError(eid, "id", "duplicate entry id")
            entry = CatalogEntry(
                id=eid, raw=raw, source=raw.get("source", ""), aliases=tuple(raw.get("aliases", []))
            )
            entries[eid] = entry
            for alias in entry.aliases:
                if alias in by_alias:
                    raise CatalogError(eid, "aliases", f"duplicate alias {alias}")
                by_alias[alias] = eid
    return Catalog(entries, lattices, by_alias, extras)


# ---------------------------------------------------------------------------
# expectation checks
# ---------------------------------------------------------------------------


def expand_expected_fibers(entry: CatalogEntry, model: WModel):
    """Expected fiber multiset [(type, place)] plus count-only leftovers."""
    from .algebra.factor import factor_over_field
    from .algebra.fields import RationalField

    field = model.field
    _, symbols = entry.field_and_symbols()
    placed: list[tuple[str, Place]] = []
    count_only: list[tuple[str, int]] = []
    for group in entry.expected_fibers():
        tname = str(KodairaType.parse(group["type"]))
        places_src = group.get("places")
        count = group.get("count", 1)
        if places_src is None:
            count_only.append((tname, count))
            continue
        total = 0
        for token in str(places_src).split(","):
            token = token.strip()
            if token == "inf":
                placed.append((tname, Place.at_infinity()))
                total += 1
                continue
            value = parse_expr(token, variable=entry.variable, field=field, symbols=symbols)
            from .algebra.poly import Poly

            if not isinstance(value, Poly):
                raise CatalogError(entry.id, "fibers", f"place {token!r} is not polynomial")
            if value.is_constant():
                placed.append((tname, Place.at_root(field, entry.variable, value.constant_value())))
                total += 1
            elif not isinstance(field, (RationalField, Tower)):
                if value.degree == 1:
                    placed.append((tname, Place(value)))
                    total += 1
                else:
                    placed.append((tname, Place(value.monic())))
                    total += value.degree
            else:
                _, facs = factor_over_field(value)
                for q, m in facs:
                    if m != 1:
                        raise CatalogError(entry.id, "fibers", f"repeated root in place {token!r}")
                    placed.append((tname, Place(q)))
                    total += q.degree
        if total != count:
            raise CatalogError(
                entry.id, "fibers", f"{group['type']}: declared count {count}, places give {total}"
            )
    return placed, count_only


def check_fibers(entry: CatalogEntry, model: WModel | None = None, config: FiberConfig | None = None) -> FiberConfig:
    """Compare analyze_fibers with the catalog expectation; returns the config."""
    model = model or entry.model()
    if config is None:
        config = analyze_fibers(model)
    placed, count_only = expand_expected_fibers(entry, model)
    got = []
    for f in config:
        got.extend([(str(f.kodaira), f.place)] * 1)
    # expand analysis places of degree d as d copies only for counting
    remaining = list(got)
    for tname, place in placed:
        hit = next(
            (i for i, (tn, pl) in enumerate(remaining) if tn == tname and pl == place), None
        )
        if hit is None:
            raise CatalogError(
                entry.id,
                "fibers",
                f"expected {tname} at {place!r}; analysis gave {config.notation()}",
            )
        remaining.pop(hit)
    for tname, count in count_only:
        matching = [i for i, (tn, pl) in enumerate(remaining) if tn == tname]
        degsum = sum(remaining[i][1].degree for i in matching)
        if degsum != count:
            raise CatalogError(
                entry.id, "fibers", f"{tname}: expected {count} fibers, found {degsum}"
            )
        for i in reversed(matching):
            remaining.pop(i)
    if remaining:
        raise CatalogError(
            entry.id, "fibers", f"analysis found unexpected fibers {remaining}"
        )
    return config


def symbolic_config(entry: CatalogEntry, model: WModel) -> FiberConfig:
    """Fiber config for symbolic-parameter entries, from declared places.

    Each declared place is classified locally (exact symbolically), so the
    declared types are verified even though Delta cannot be factored.
    """
    placed, count_only = expand_expected_fibers(entry, model)
    if count_only:
        raise CatalogError(entry.id, "fibers", "symbolic entries need explicit places")
    fibers = []
    for tname, place in placed:
        data = kodaira_type_at(model, place)
        if str(data.kodaira) != tname:
            raise CatalogError(
                entry.id, "fibers", f"declared {tname} at {place!r}, computed {data.kodaira}"
            )
        fibers.append(data)
    return FiberConfig(fibers)


def validate(entry: CatalogEntry, catalog: Catalog | None = None, quick: bool = False) -> dict:
    """Run every cross-module expectation for one entry; returns a report."""
    from . import isogeny as iso_mod
    from .mordell_weil import HeightContext
    from .weierstrass.transform import semantic_model_equal, verify_transformation

    report = {"id": entry.id, "checks": [], "ok": True}

    def note(name, ok, detail=""):
        report["checks"].append({"name": name, "ok": bool(ok), "detail": detail})
        if not ok:
            report["ok"] = False

    if entry.tower_limit:
        note("tower_limit", True, "checks skipped: coordinates exceed two radicals")
        return report

    try:
        model = entry.model()
        note("parse", True)
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        note("parse", False, str(exc))
        return report

    config = None
    if entry.expected_fibers():
        try:
            if entry.symbolic:
                config = symbolic_config(entry, model)
                note("fibers(symbolic places)", True)
            else:
                config = check_fibers(entry, model)
                note("fibers", True, config.notation())
                if config.euler_sum != 24:
                    note("euler", False, str(config.euler_sum))
        except Exception as exc:  # noqa: BLE001
            note("fibers", False, str(exc))

    for P, order in entry.torsion_points():
        ok = on_curve(model, P)
        note(f"torsion point on curve (order {order})", ok)
        if ok:
            got = torsion_order(model, P, bound=max(order, 8))
            note(f"torsion order {order}", got == order, f"computed {got}")

    sections = entry.sections()
    specs = {s["name"]: s for s in entry.raw.get("sections", [])}
    needs_height = [nm for nm, sp in specs.items() if "height" in sp]
    ctx = None
    for nm, P in sections.items():
        note(f"{nm} on curve", on_curve(model, P))
    if needs_height and not quick:
        try:
            ctx = HeightContext(model, [sections[nm] for nm in needs_height], config=config,
                                hints=entry.raw.get("hints"))
            for nm in needs_height:
                want = Fraction(specs[nm]["height"])
                got = ctx.height(sections[nm])
                note(f"h({nm}) = {want}", got == want, f"computed {got}")
        except Exception as exc:  # noqa: BLE001
            note("heights", False, str(exc))

    if catalog is not None and not quick:
        for link in entry.raw.get("isogeny_links", []):
            try:
                target_entry = catalog.get(link["target"])
                target = target_entry.model()
                if link["degree"] == 2:
                    phi = iso_mod.two_isogeny(iso_mod.KernelForm2(model))
                    got = phi.target
                else:
                    K = iso_mod.KernelForm3(model)
                    if link.get("form") == "raw":
                        got = iso_mod.three_isogeny_raw(K).target
                    else:
                        got = iso_mod.three_isogeny_normalized(K).model
                from .algebra.fields import common_field
                from .mordell_weil import lift_model

                big = common_field(got.field, target.field)
                got_l, target_l = lift_model(got, big), lift_model(target, big)
                if link.get("exact", False):
                    ok = got_l.coefficients() == target_l.coefficients()
                else:
                    ok = semantic_model_equal(got_l, target_l)
                note(f"isogeny deg {link['degree']} -> {link['target']}", ok)
            except Exception as exc:  # noqa: BLE001
                note(f"isogeny -> {link.get('target')}", False, str(exc))

        isom = entry.raw.get("isomorphism")
        if isom:
            try:
                from .mordell_weil import lift_model

                target = catalog.get(isom["target"]).model()
                src = model
                if isom.get("tower"):
                    tower = Tower(tuple(isom["tower"]))
                    src = lift_model(src, tower)
                    target = lift_model(target, tower)
                ok = verify_transformation(src, target, isom["t"], isom["x"], isom["y"])
                note(f"isomorphism -> {isom['target']}", ok)
            except Exception as exc:  # noqa: BLE001
                note(f"isomorphism -> {isom.get('target')}", False, str(exc))

    return report
