import json

import pytest

from k3kit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_fibers_entry(capsys):
    code, out = run(capsys, "fibers", "--entry", "Thm3.2/E_t")
    assert code == 0
    assert "I0*" in out and "Euler sum 24" in out


def test_snf_stdin(capsys, monkeypatch, tmp_path):
    mat = tmp_path / "m.txt"
    mat.write_text("2 0\n0 4\n")
    code, out = run(capsys, "snf", "--matrix", str(mat))
    assert code == 0 and "diag(2, 4)" in out


def test_discform_json(capsys, tmp_path):
    mat = tmp_path / "m.txt"
    mat.write_text(json.dumps([[0, 0, 3], [0, 4, 0], [3, 0, 0]]))
    code, out = run(capsys, "--json", "discform", "--matrix", str(mat))
    assert code == 0
    doc = json.loads(out)
    assert doc["orders"] == [3, 12]


def test_match_verb(capsys, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("\n".join(" ".join(map(str, row)) for row in json.load(open(_ns20_path()))))
    b.write_text("12 0\n0 24\n")
    code, out = run(capsys, "match", "--matrix", str(a), "--other", str(b), "--sign", "-1")
    assert code == 1  # NS_20 has determinant 36, no match against diag(12,24)


def _ns20_path():
    import tempfile, k3kit.catalog as cm

    cat = cm.load()
    p = tempfile.NamedTemporaryFile(suffix=".json", delete=False, mode="w")
    json.dump(cat.lattices["NS_20"]["matrix"], p)
    p.close()
    return p.name


def test_match_positive(capsys, tmp_path):
    import k3kit.catalog as cm

    cat = cm.load()
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text(json.dumps(cat.lattices["NS_FP"]["matrix"]))
    b.write_text("12 0\n0 24\n")
    code, out = run(capsys, "match", "--matrix", str(a), "--other", str(b), "--sign", "-1")
    assert code == 0 and "match" in out


def test_congruence_verb(capsys, tmp_path):
    t1 = tmp_path / "t1.txt"; t1.write_text("6 0\n0 3\n")
    t2 = tmp_path / "t2.txt"; t2.write_text("1 0\n0 2\n")
    m = tmp_path / "m.txt"; m.write_text("2 -1\n1 1\n")
    code, out = run(capsys, "congruence", "--matrix", str(t1), "--other", str(t2), "--map", str(m))
    assert code == 0 and "True" in out


def test_bsv_verb(capsys, tmp_path):
    t = tmp_path / "t.txt"; t.write_text("2 0\n0 4\n")
    code, out = run(capsys, "bsv", "--matrix", str(t), "-p", "3")
    assert code == 0 and "True" in out


def test_ap_verb(capsys):
    code, out = run(capsys, "ap", "--entry", "Y2/E_w", "--primes", "5,7,11")
    assert code == 0
    lines = dict(line.split("\t") for line in out.strip().splitlines()[1:])
    assert lines["11"] == "14"


def test_invariance_verb(capsys):
    code, out = run(capsys, "invariance", "--pair", "E19k2:quotient3", "--primes", "5..23")
    assert code == 0 and "all equal: True" in out


def test_push_verb(capsys):
    code, out = run(capsys, "push", "--entry", "Y10/E_11", "--section", "p1", "--degree", "3")
    assert code == 0 and "->" in out


def test_isogeny_verb(capsys):
    code, out = run(capsys, "isogeny", "--entry", "Thm3.2/E_t", "--degree", "2")
    assert code == 0 and "y^2" in out


def test_validate_single_entry(capsys):
    code, out = run(capsys, "validate", "--entry", "Table2/E9")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_bench_verb(capsys):
    code, out = run(capsys, "bench", "--entry", "Et", "-p", "499", "--repeats", "1")
    assert code == 0 and "evals/s" in out


def test_usage_error_exit_code(capsys):
    assert main(["fibers"]) == 2  # neither --entry nor --eq


def test_unknown_entry_exit_code(capsys):
    assert main(["fibers", "--entry", "nope/missing"]) == 2
