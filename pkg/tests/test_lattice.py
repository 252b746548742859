import random
from fractions import Fraction as F

import pytest

from k3kit.lattice import (
    _matmul,
    bsv_criterion,
    det_int,
    disc_form,
    disc_forms_match,
    disc_group_of_diagonal,
    smith_normal_form,
    verify_congruence,
)


def test_snf_diagonal_fixed_point():
    U, D, V = smith_normal_form([[2, 0], [0, 4]])
    assert [D[0][0], D[1][1]] == [2, 4]


def test_snf_random_reproduction():
    rng = random.Random(42)
    for _ in range(60):
        n = rng.randint(1, 6)
        A = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        U, D, V = smith_normal_form(A)
        assert _matmul(_matmul(U, A), V) == D
        dets = [D[i][i] for i in range(n)]
        for a, b in zip(dets, dets[1:]):
            if a and b:
                assert b % a == 0
        prod = 1
        for d in dets:
            prod *= d
        assert abs(prod) == abs(det_int(A))


def test_ns20_snf_and_disc(catalog):
    M = catalog.lattices["NS_20"]["matrix"]
    U, D, V = smith_normal_form(M)
    nontrivial = sorted(abs(D[i][i]) for i in range(len(M)) if abs(D[i][i]) > 1)
    assert nontrivial == [3, 12]
    assert abs(det_int(M)) == 36


def test_ns_fp_snf(catalog):
    M = catalog.lattices["NS_FP"]["matrix"]
    U, D, V = smith_normal_form(M)
    nontrivial = sorted(abs(D[i][i]) for i in range(len(M)) if abs(D[i][i]) > 1)
    assert nontrivial == [12, 24]
    assert abs(det_int(M)) == 288


def test_disc_form_printed_generator_values(catalog):
    # the dual vectors printed for diag(4, 18)
    M = [[4, 0], [0, 18]]
    G = disc_form(M)
    assert G.orders == (2, 36)
    f1 = [F(0), F(1, 2)]
    f2 = [F(1, 4), F(7, 18)]
    q = lambda v: sum(M[i][j] * v[i] * v[j] for i in range(2) for j in range(2)) % 2
    b = lambda v, w: sum(M[i][j] * v[i] * w[j] for i in range(2) for j in range(2)) % 1
    assert q(f1) == F(1, 2) and q(f2) == F(35, 36) and b(f1, f2) == F(1, 2)


def test_disc_form_rank_one():
    G = disc_group_of_diagonal([2])
    assert G.orders == (2,)
    assert G.q_of((1,)) == F(1, 2)


def test_disc_form_functional_equations(catalog):
    for name in ("NS_20", "NS_FP", "NS_H11", "M20", "M18", "M36"):
        G = disc_form(catalog.lattices[name]["matrix"])
        r = len(G.orders)
        for i in range(r):
            gi = tuple(1 if s == i else 0 for s in range(r))
            for n in range(2, 5):
                na = tuple((n if s == i else 0) for s in range(r))
                assert G.q_of(na) == (n * n * G.q_of(gi)) % 2
            for j in range(r):
                gj = tuple(1 if s == j else 0 for s in range(r))
                sij = tuple((1 if s in (i, j) else 0) for s in range(r)) if i != j else tuple(
                    (2 if s == i else 0) for s in range(r)
                )
                lhs = G.b_of(gi, gj)
                rhs = F(1, 2) * (G.q_of(sij) - G.q_of(gi) - G.q_of(gj)) % 1
                assert lhs == rhs


def test_match_self_identity(catalog):
    G = disc_form(catalog.lattices["M20"]["matrix"])
    assert disc_forms_match(G, G, +1) is not None


def test_match_rejects_wrong_order():
    assert disc_forms_match(disc_group_of_diagonal([6, 12]), disc_group_of_diagonal([2, 4]), -1) is None


def test_match_nikulin_pairs(catalog):
    pairs = [("NS_FP", "T_K10"), ("NS_20", "M20"), ("NS_19", "M20"),
             ("NS_H20_10", "M18"), ("NS_H19_10", "M18"), ("NS_H11", "M18"), ("NS_HC", "M36")]
    for ns, t in pairs:
        G1 = disc_form(catalog.lattices[ns]["matrix"])
        G2 = disc_form(catalog.lattices[t]["matrix"])
        assert disc_forms_match(G1, G2, -1) is not None, (ns, t)


def test_match_distinguishes_disc72_forms(catalog):
    G = disc_form(catalog.lattices["NS_HC"]["matrix"])
    wrong = disc_form(catalog.lattices["M18"]["matrix"])
    assert disc_forms_match(G, wrong, -1) is None


def test_generator_change_between_ns19_and_ns20(catalog):
    # the two 19x19 lattices have the same discriminant form
    G19 = disc_form(catalog.lattices["NS_19"]["matrix"])
    G20 = disc_form(catalog.lattices["NS_20"]["matrix"])
    assert disc_forms_match(G19, G20, +1) is not None


def test_congruence_examples():
    assert verify_congruence([[6, 0], [0, 3]], [[1, 0], [0, 2]], [[2, -1], [1, 1]])
    assert verify_congruence([[2, 0], [0, 1]], [[1, 0], [0, 2]], [[0, 1], [1, 0]])
    assert verify_congruence([[5, 1], [1, 3]], [[5, 1], [1, 3]], [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        verify_congruence([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 1], [1, 1]])


def test_bsv_examples():
    assert bsv_criterion([[2, 0], [0, 4]], 3) is True
    assert bsv_criterion([[6, 0], [0, 12]], 3) is True
    assert bsv_criterion([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3) == "no isometry"


def test_bsv_p2_parity_condition():
    # det 6 = 2*3 with 3 = 3 (mod 8) appearing once: fails at p = 2
    assert bsv_criterion([[2, 0], [0, 3]], 2) is False
    assert bsv_criterion([[3, 0], [0, 3]], 2) is True
