"""Command-line front end.

Exit codes: 0 verified/success, 1 verification failure, 2 usage or input
error.  ``--json`` switches every verb to machine-readable reports.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog as catalog_mod
from .algebra.fields import QQ
from .lattice import bsv_criterion, det_int, disc_form, disc_forms_match, smith_normal_form, verify_congruence
from .weierstrass.kodaira import analyze_fibers
from .weierstrass.model import WModel, model_from_strings


def _load_catalog(args):
    path = getattr(args, "catalog", None) or os.environ.get("K3KIT_CATALOG")
    return catalog_mod.load(path)


def _resolve_model(args, cat) -> tuple[str, WModel]:
    if getattr(args, "entry", None):
        entry = cat.get(args.entry)
        return entry.id, entry.model()
    if getattr(args, "eq", None):
        spec = json.loads(open(args.eq).read()) if args.eq != "-" else json.load(sys.stdin)
        from .algebra.fields import Tower

        field = Tower(tuple(spec["tower"])) if spec.get("tower") else QQ
        model = model_from_strings(field, spec.get("variable", "t"), spec["coefficients"], name=spec.get("name", "ad-hoc"))
        return model.name, model
    raise SystemExit(2)


def _read_matrix(src: str):
    text = sys.stdin.read() if src == "-" else open(src).read()
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return [[int(x) for x in line.split()] for line in text.splitlines() if line.strip()]


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=1, default=str))
    else:
        print(text)


def cmd_fibers(args) -> int:
    cat = _load_catalog(args)
    name, model = _resolve_model(args, cat)
    config = analyze_fibers(model)
    _emit(args, {"entry": name, "fibers": config.signature(), "euler": config.euler_sum},
          f"{name}: {config.notation()}   (Euler sum {config.euler_sum})")
    return 0


def cmd_isogeny(args) -> int:
    from .isogeny import KernelForm2, KernelForm3, three_isogeny_normalized, three_isogeny_raw, two_isogeny

    cat = _load_catalog(args)
    name, model = _resolve_model(args, cat)
    if args.degree == 2:
        iso = two_isogeny(KernelForm2(model))
        target = iso.target
        raw = None
    else:
        raw = three_isogeny_raw(KernelForm3(model)).target
        target = three_isogeny_normalized(KernelForm3(model)).model
    payload = {"entry": name, "degree": args.degree, "target": target.equation_str()}
    text = f"{name} --{args.degree}-isogeny--> {target.equation_str()}"
    if raw is not None:
        payload["untwisted_quotient"] = raw.equation_str()
        text += f"\n  untwisted quotient: {raw.equation_str()}"
    _emit(args, payload, text)
    return 0


def cmd_push(args) -> int:
    from .isogeny import KernelForm2, KernelForm3, push_point, three_isogeny, two_isogeny

    cat = _load_catalog(args)
    entry = cat.get(args.entry)
    model = entry.model()
    P = entry.sections()[args.section]
    if args.degree == 2:
        iso = two_isogeny(KernelForm2(model))
    else:
        iso = three_isogeny(KernelForm3(model))
    Q = push_point(iso, P)
    _emit(args, {"entry": entry.id, "section": args.section, "x": repr(Q.x), "y": repr(Q.y)},
          f"{args.section} -> ({Q.x!r}, {Q.y!r})")
    return 0


def cmd_heights(args) -> int:
    from .mordell_weil import HeightContext, gram_det

    cat = _load_catalog(args)
    entry = cat.get(args.entry)
    model = entry.model()
    secs = entry.sections()
    if not secs:
        print(f"{entry.id}: no sections in the catalog", file=sys.stderr)
        return 2
    names = args.sections.split(",") if args.sections else list(secs)
    basis = [secs[n] for n in names]
    ctx = HeightContext(model, basis, hints=entry.raw.get("hints"))
    H = ctx.height_gram(basis)
    det = gram_det(H)
    rows = [[str(x) for x in row] for row in H]
    text = "\n".join([f"{entry.id} height Gram ({', '.join(names)}):"]
                     + ["  [" + ", ".join(r) + "]" for r in rows]
                     + [f"  det = {det}"])
    _emit(args, {"entry": entry.id, "sections": names, "gram": rows, "det": str(det)}, text)
    return 0


def cmd_ns(args) -> int:
    from .verify import check_ns_assembly

    cat = _load_catalog(args)
    res = check_ns_assembly(cat, args.name)
    _emit(args, {"name": args.name, "ok": res.ok}, res.line())
    return 0 if res.ok else 1


def cmd_snf(args) -> int:
    A = _read_matrix(args.matrix)
    U, D, V = smith_normal_form(A)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
    _emit(args, {"diagonal": diag, "det": det_int(A) if len(A) == len(A[0]) else None},
          "D = diag(" + ", ".join(str(d) for d in diag) + ")")
    return 0


def cmd_discform(args) -> int:
    A = _read_matrix(args.matrix)
    G = disc_form(A)
    gens = [[str(x) for x in g] for g in G.gens]
    qs = [str(q) for q in (G.q or [])]
    text = f"G = {' x '.join(f'Z/{d}' for d in G.orders) or 'trivial'}; q = ({', '.join(qs)})"
    _emit(args, {"orders": list(G.orders), "q": qs, "generators": gens}, text)
    return 0


def cmd_match(args) -> int:
    A = _read_matrix(args.matrix)
    B = _read_matrix(args.other)
    m = disc_forms_match(disc_form(A), disc_form(B), args.sign)
    ok = m is not None
    _emit(args, {"match": ok, "images": m}, f"match (sign {args.sign:+d}): {m if ok else 'none'}")
    return 0 if ok else 1


def cmd_congruence(args) -> int:
    T1 = [[Fraction(x) for x in row] for row in _read_matrix(args.matrix)]
    T2 = [[Fraction(x) for x in row] for row in _read_matrix(args.other)]
    M = [[Fraction(x) for x in row] for row in _read_matrix(args.map)]
    ok = verify_congruence(T1, T2, M)
    _emit(args, {"congruent": ok}, f"M^t T2 M == T1: {ok}")
    return 0 if ok else 1


def cmd_bsv(args) -> int:
    T = _read_matrix(args.matrix)
    got = bsv_criterion(T, args.p)
    _emit(args, {"p": args.p, "result": got}, f"criterion at p={args.p}: {got!r}")
    return 0


def _parse_primes(spec: str) -> list[int]:
    from .lseries import primes_in_range

    if ".." in spec:
        lo, hi = spec.split("..")
        return primes_in_range(int(lo), int(hi))
    return [int(x) for x in spec.split(",")]


def cmd_ap(args) -> int:
    from .lseries import compute_ap

    cat = _load_catalog(args)
    name, model = _resolve_model(args, cat)
    ds = None
    if getattr(args, "entry", None):
        entry = cat.get(args.entry)
        ds = [s.get("field_disc", 1) for s in entry.raw.get("sections", [])] or None
        if entry.raw.get("rank") == 0:
            ds = []
    rows = []
    for p in _parse_primes(args.primes):
        try:
            r = compute_ap(model, p, ds)
            rows.append({"p": p, "A_p": r.A_p, "partial": r.partial_sections})
        except Exception as exc:  # noqa: BLE001
            rows.append({"p": p, "error": str(exc)})
    text = "p\tA_p\n" + "\n".join(
        f"{row['p']}\t{row.get('A_p', 'bad prime')}" for row in rows
    )
    _emit(args, {"entry": name, "rows": rows}, text)
    return 0


def cmd_invariance(args) -> int:
    from .isogeny import KernelForm2, KernelForm3, three_isogeny_raw, two_isogeny
    from .lseries import verify_invariance

    cat = _load_catalog(args)
    a_key, b_key = args.pair.split(":")
    ea = cat.get(a_key)
    model_a = ea.model()
    primes = _parse_primes(args.primes)
    if b_key in ("quotient2", "quotient3"):
        if b_key == "quotient2":
            model_b = two_isogeny(KernelForm2(model_a)).target
        else:
            model_b = three_isogeny_raw(KernelForm3(model_a)).target
        ds_b = None
    else:
        eb = cat.get(b_key)
        model_b = eb.model()
        ds_b = [s.get("field_disc", 1) for s in eb.raw.get("sections", [])] or None
        if eb.raw.get("rank") == 0:
            ds_b = []
    ds_a = [s.get("field_disc", 1) for s in ea.raw.get("sections", [])] or None
    if ea.raw.get("rank") == 0:
        ds_a = []
    if ds_a is None or ds_b is None:
        ds_a = ds_b = None
    rep = verify_invariance(model_a, model_b, ds_a, ds_b, primes, jobs=args.jobs)
    payload = {"pair": args.pair, "rows": rep.rows, "all_equal": rep.all_equal, "pointwise": rep.pointwise_ok}
    _emit(args, payload, rep.table() + f"\nall equal: {rep.all_equal}, pointwise smooth a_p equal: {rep.pointwise_ok}")
    return 0 if rep.all_equal and rep.pointwise_ok else 1


def cmd_validate(args) -> int:
    from .verify import run_all
    from .catalog import validate as validate_entry

    cat = _load_catalog(args)
    if args.entry and args.entry != "--all":
        entry = cat.get(args.entry)
        rep = validate_entry(entry, cat)
        lines = [f"{'PASS' if c['ok'] else 'FAIL'}  {entry.id}: {c['name']}" + (f"  [{c['detail']}]" if c["detail"] else "") for c in rep["checks"]]
        _emit(args, rep, "\n".join(lines))
        return 0 if rep["ok"] else 1
    results = run_all(cat, jobs=args.jobs, quick=args.quick)
    ok = all(r.ok for r in results)
    text = "\n".join(r.line() for r in results) + f"\n{sum(r.ok for r in results)}/{len(results)} checks passed"
    _emit(args, {"ok": ok, "checks": [r.__dict__ for r in results]}, text)
    return 0 if ok else 1


def cmd_bench(args) -> int:
    from .lseries import bench_counting

    cat = _load_catalog(args)
    name, model = _resolve_model(args, cat)
    r = bench_counting(model, args.p, repeats=args.repeats)
    text = (f"{name} at p={r['p']}: {r['points']} fiber-point evaluations in "
            f"{r['seconds']:.4f} s -> {r['evals_per_second']:.3e} evals/s")
    _emit(args, {"entry": name, **r}, text)
    return 0 if r["evals_per_second"] >= args.target else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3kit", description=__doc__)
    ap.add_argument("--catalog", help="catalog directory (default: packaged, or $K3KIT_CATALOG)")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, entry=True, eq=True):
        if entry:
            p.add_argument("--entry", help="catalog entry id or alias")
        if eq:
            p.add_argument("--eq", help="JSON equation file (or - for stdin)")

    p = sub.add_parser("fibers", help="Kodaira fiber configuration")
    common(p)
    p.set_defaults(func=cmd_fibers)

    p = sub.add_parser("isogeny", help="2- or 3-isogenous model")
    common(p)
    p.add_argument("--degree", type=int, choices=(2, 3), required=True)
    p.set_defaults(func=cmd_isogeny)

    p = sub.add_parser("push", help="push a catalog section through an isogeny")
    p.add_argument("--entry", required=True)
    p.add_argument("--section", required=True)
    p.add_argument("--degree", type=int, choices=(2, 3), required=True)
    p.set_defaults(func=cmd_push)

    p = sub.add_parser("heights", help="height pairing Gram matrix of catalog sections")
    p.add_argument("--entry", required=True)
    p.add_argument("--sections", help="comma-separated names (default: all)")
    p.set_defaults(func=cmd_heights)

    p = sub.add_parser("ns", help="rebuild a printed NS Gram matrix")
    p.add_argument("--name", required=True)
    p.set_defaults(func=cmd_ns)

    p = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    p.add_argument("--matrix", required=True, help="path or - for stdin")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("discform", help="discriminant group and q-values")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_discform)

    p = sub.add_parser("match", help="discriminant-form isomorphism search")
    p.add_argument("--matrix", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--sign", type=int, choices=(1, -1), default=-1)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("congruence", help="verify T1 = M^t T2 M")
    p.add_argument("--matrix", required=True, help="T1")
    p.add_argument("--other", required=True, help="T2")
    p.add_argument("--map", required=True, help="M")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("bsv", help="rational isometry criterion for a p-isogeny")
    p.add_argument("--matrix", required=True)
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_bsv)

    p = sub.add_parser("ap", help="A_p trace sums")
    common(p)
    p.add_argument("--primes", required=True, help="A..B or comma list")
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("invariance", help="A_p equality for an isogeny pair")
    p.add_argument("--pair", required=True, help="entryA:entryB or entryA:quotient2|quotient3")
    p.add_argument("--primes", default="5..37")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("validate", help="run catalog expectations")
    p.add_argument("--entry", help="one entry, or omit / --all for everything")
    p.add_argument("--all", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--quick", action="store_true", help="skip the slow cross checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="counting-loop throughput")
    common(p)
    p.add_argument("-p", type=int, default=997)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--target", type=float, default=1e6)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"verification error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
