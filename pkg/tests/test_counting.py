"""Exact values and bound chains for the counting formulas."""

import math
from fractions import Fraction

import pytest

from stingraylab.counting import (alt_overlap_lower_bound,
                                  alt_overlap_proportion,
                                  centralizer_order, class_size,
                                  class_size_per_subspace, delta,
                                  duo_partner_count, gamma_eps,
                                  num_subspaces, omega, prob_i_upper,
                                  rat_str, rho_gen_lower_bound, torus_order)
from stingraylab.classical import ClassicalGroup, group_order
from stingraylab.linalg import Mat
from stingraylab.oracle import (_find_stingray_rep, exhaustive_centralizer,
                                group_elements)


F = Fraction


# ---------------------------------------------------------------------------
# omega / delta / gamma
# ---------------------------------------------------------------------------

def test_omega_values():
    assert omega(1, 1, 2) == F(1, 2)
    assert omega(1, 4, 2) == F(315, 1024)
    assert omega(2, 3, 2, -1) == F(27, 32)


def test_omega_rejects_bad_params():
    for args in ((0, 3, 2, 1), (4, 3, 2, 1), (1, 3, 1, 1), (1, 3, 2, 0)):
        with pytest.raises(ValueError):
            omega(*args)


def test_delta_values():
    assert delta(2, 4, 2) == F(35, 16)
    assert delta(1, 3, 2, -1) == F(3, 4)
    with pytest.raises(ValueError):
        delta(3, 3, 2)


def test_delta_plus_q_bound_chain():
    # 1 < Delta(k,d;q) with per-q upper constants; smaller upper for large q.
    uppers = {2: F(4), 3: F(9, 5)}
    for q in (2, 3, 4, 5, 7, 8, 9):
        up = uppers.get(q, F(16, 11))
        if q >= 9:
            up = F(81, 71)
        for d in range(2, 17):
            for k in range(1, d):
                val = delta(k, d, q, 1)
                assert 1 < val < up, (k, d, q, val)


def test_delta_minus_q_bound_chain():
    # Even k: (1+1/q)^{-1} < Delta < 1 + q^{-k-1}; odd k >= 3:
    # (1-q^{-k-1})/(1+1/q) < Delta <= 1 with equality only at k = d-1.
    for q in (2, 3, 4, 5, 7, 8, 9):
        for d in range(2, 17):
            for k in range(1, d):
                val = delta(k, d, q, -1)
                if k % 2 == 0:
                    assert 1 / (1 + F(1, q)) < val < 1 + F(1, q ** (k + 1))
                elif k >= 3:
                    # equality with the lower constant occurs at k = d - 1
                    lo = (1 - F(1, q ** (k + 1))) / (1 + F(1, q))
                    assert lo <= val <= 1, (k, d, q, val)
                    if k < d - 1:
                        assert lo < val < 1


def test_delta_minus_equality_at_top_odd_k():
    assert delta(3, 4, 2, -1) == F(5, 8)
    # matches the odd-k lower constant exactly at k = d - 1
    assert (1 - F(1, 2 ** 4)) / (1 + F(1, 2)) == F(5, 8)


def test_gamma_values():
    for k in (2, 4, 6, 8):
        for q in (2, 3, 5):
            assert gamma_eps(k, k, q, -1) == 1
    assert gamma_eps(8, 2, 2, 1) == F(5, 11)
    with pytest.raises(ValueError):
        gamma_eps(3, 2, 2, 1)
    with pytest.raises(ValueError):
        gamma_eps(2, 4, 2, 1)


def test_gamma_bound_chain():
    # 1 <= Gamma(-1) < 1 + 1/q, Gamma(+1) < 1, and Gamma(+1) >= 5/11 once
    # the ambient dimension reaches 10.
    for q in (2, 3, 4, 5, 7, 9):
        for e1 in range(2, 15, 2):
            for e2 in range(2, e1 + 1, 2):
                gm = gamma_eps(e1, e2, q, -1)
                gp = gamma_eps(e1, e2, q, 1)
                assert 1 <= gm < 1 + F(1, q), (e1, e2, q, gm)
                assert gp < 1
                if e1 + e2 >= 10:
                    assert gp >= F(5, 11), (e1, e2, q, gp)


# ---------------------------------------------------------------------------
# cardinality formulas
# ---------------------------------------------------------------------------

def test_num_subspaces_values():
    assert num_subspaces(4, 2, 2, "Sp") == 20
    # nondegenerate points of the Hermitian form on GF(4)^3
    assert num_subspaces(3, 2, 1, "U") == 12
    with pytest.raises(ValueError):
        num_subspaces(4, 2, 2, "U")      # unitary degrees are odd
    with pytest.raises(ValueError):
        num_subspaces(4, 2, 3, "Sp")     # symplectic degrees are even


# Per-(type, q) sandwich constants (a, b): a*q^(u*e1*e2) <= |U| <= b*...
_SANDWICH = {
    ("L", 2): (F(1), F(4)),
    ("L", 3): (F(1), F(9, 5)),
    ("U", 2): (F(5, 8), F(1)),
    ("U", 3): (F(20, 27), F(1)),
    ("Sp", 2): (F(1), F(16, 11)),
    ("Sp", 3): (F(1), F(8, 7)),
    ("O-", 2): (F(1, 2), F(12, 11)),
    ("O-", 3): (F(1, 2), F(54, 71)),
    ("O+", 2): (F(5, 22), F(8, 11)),
    ("O+", 3): (F(20, 61), F(81, 142)),
}

# Minimum ambient dimension for which the sandwich is claimed.
_SANDWICH_MIN_D = {"L": 2, "U": 3, "Sp": 4, "O+": 10, "O-": 10}


def _valid_degrees(gtype, d):
    if gtype == "L":
        return [e for e in range(1, d)]
    if gtype == "U":
        return [e for e in range(1, d) if e % 2 == 1]
    return [e for e in range(2, d, 2)]


def test_num_subspaces_sandwich():
    for (gtype, q), (a, b) in _SANDWICH.items():
        u = 2 if gtype == "U" else 1
        for d in range(_SANDWICH_MIN_D[gtype], 15):
            if gtype in ("Sp", "O+", "O-") and d % 2:
                continue
            for e1 in _valid_degrees(gtype, d):
                if (gtype, d, e1, q) == ("U", 2, 1, 2):
                    continue
                if 2 * e1 < d:       # bounds are stated for e1 >= e2
                    continue
                val = num_subspaces(d, q, e1, gtype)
                lo = a * q ** (u * e1 * (d - e1))
                hi = b * q ** (u * e1 * (d - e1))
                assert lo <= val <= hi, (gtype, q, d, e1, val)


def test_class_size_per_subspace_values():
    assert class_size_per_subspace(4, 2, 2, "L") == 2
    for d, q in ((3, 2), (4, 3), (5, 2)):
        assert class_size_per_subspace(d, q, 1, "L") == 1
    assert class_size_per_subspace(4, 2, 2, "Sp") == 2


def test_centralizer_and_class_size_values():
    assert centralizer_order(4, 2, 3, "L") == 7
    assert centralizer_order(4, 2, 2, "L") == 18
    assert centralizer_order(4, 2, 2, "Sp") == 18
    assert centralizer_order(4, 2, 2, "Sp") == 3 * group_order("Sp", 2, 2)
    # class sizes follow by Lagrange
    assert class_size(4, 2, 3, "L") == group_order("L", 4, 2) // 7
    assert class_size(4, 2, 2, "Sp") == group_order("Sp", 4, 2) // 18


def test_cardinalities_integral_on_grid():
    for gtype in ("L", "U", "Sp", "O+", "O-"):
        for q in (2, 3):
            for d in range(2, 9):
                if gtype in ("Sp", "O+", "O-") and d % 2:
                    continue
                for e in _valid_degrees(gtype, d):
                    n = num_subspaces(d, q, e, gtype)
                    c = class_size_per_subspace(d, q, e, gtype)
                    z = centralizer_order(d, q, e, gtype)
                    s = class_size(d, q, e, gtype)
                    assert n > 0 and c > 0 and z > 0 and s > 0
                    assert group_order(gtype, d, q) % z == 0


def test_duo_partner_count_L():
    N, ratio = duo_partner_count(4, 2, 2, "L")
    assert N == 512
    assert ratio == F(9, 256)
    assert N * ratio == centralizer_order(4, 2, 2, "L")


def test_duo_partner_count_bounds_non_L():
    lo, hi = duo_partner_count(4, 2, 2, "Sp")
    base = num_subspaces(4, 2, 2, "Sp") * class_size_per_subspace(4, 2, 2, "Sp")
    assert hi == base
    assert lo == (1 - F(3, 4)) * base
    assert 0 < lo < hi


def test_torus_orders():
    assert torus_order("L", 3, 2) == 7
    assert torus_order("U", 3, 2) == 9
    assert torus_order("Sp", 4, 3) == 10
    assert torus_order("O-", 6, 2) == 9


# ---------------------------------------------------------------------------
# generation bounds
# ---------------------------------------------------------------------------

def test_rho_gen_lower_bound_values():
    assert rho_gen_lower_bound("L", 9, 2, 5, 4) == F(1589, 6400)
    assert float(rho_gen_lower_bound("L", 9, 2, 5, 4)) == 0.24828125
    assert rho_gen_lower_bound("O-", 10, 2, 8, 2) == 1 - F("1.85") * F(1, 2 ** 7)
    assert rho_gen_lower_bound("O+", 32, 11, 30, 2) == 1 - F("10.43") * F(1, 11 ** 29)
    assert rho_gen_lower_bound("Sp", 10, 3, 6, 4) == 1 - F("1.52") * F(1, 3 ** 7)
    assert rho_gen_lower_bound("U", 10, 3, 7, 3) == 1 - F("1.6e-8") * F(1, 3 ** 7)


def test_rho_gen_lower_bound_guards():
    with pytest.raises(ValueError):
        rho_gen_lower_bound("L", 8, 2, 4, 4)
    with pytest.raises(ValueError):
        rho_gen_lower_bound("L", 9, 2, 4, 5)   # e2 > e1


def test_rho_gen_bound_above_0975_for_form_types():
    for gtype in ("U", "Sp", "O+", "O-"):
        for q in (2, 3, 4):
            for d in (10, 12, 16):
                if gtype == "U":
                    val = rho_gen_lower_bound(gtype, d + 1, q, d - 2, 3)
                else:
                    # the generic kappa bound for O+ at q=2, e2=2 only
                    # clears 0.975 from dimension 14 up
                    if gtype == "O+" and q == 2 and d < 14:
                        continue
                    val = rho_gen_lower_bound(gtype, d, q, d - 2, 2)
                assert val > F("0.975"), (gtype, q, d, val)


def test_prob_i_upper_values():
    for i in (4, 7):
        for gtype in ("L", "U", "Sp", "O+", "O-"):
            assert prob_i_upper(i, gtype, 2, 10, 6, 4) == 0
    assert prob_i_upper(1, "O-", 2, 10, 8, 2) == 0
    # only the reducible class for L carries the q^-1 + q^-2 mass
    assert prob_i_upper(1, "L", 2, 10, 6, 4) == F(1, 2) + F(1, 4)
    assert prob_i_upper(1, "L", 3, 10, 6, 4) == F(1, 3) + F(1, 9)


def test_prob_sum_matches_kappa_O_minus():
    # the per-class constants for O- at q = 2 total 1.846 < 1.85
    d, e1, e2 = 10, 8, 2
    total = sum(prob_i_upper(i, "O-", 2, d, e1, e2) for i in range(1, 10))
    assert total == F("1.846") * F(1, 2 ** (d - 3))
    assert 1 - total >= rho_gen_lower_bound("O-", d, 2, e1, e2)


def test_prob_i_upper_guards():
    with pytest.raises(ValueError):
        prob_i_upper(1, "L", 2, 8, 4, 4)
    with pytest.raises(ValueError):
        prob_i_upper(10, "L", 2, 10, 6, 4)


# ---------------------------------------------------------------------------
# alternating overlap formulas
# ---------------------------------------------------------------------------

def test_alt_overlap_values():
    assert alt_overlap_proportion(7, 3, 3) == F(18, 35)
    assert alt_overlap_proportion(30, 3, 5) == F(75, 203)
    assert alt_overlap_lower_bound(30, 3, 5) == F(3 * 5 * 15, 29 ** 2)
    assert alt_overlap_proportion(30, 3, 5) >= alt_overlap_lower_bound(30, 3, 5)


def test_alt_overlap_guards():
    with pytest.raises(ValueError):
        alt_overlap_proportion(7, 5, 3)     # p > r
    with pytest.raises(ValueError):
        alt_overlap_proportion(8, 3, 5)     # p + r >= n


def test_alt_overlap_dominates_lower_bound():
    for n in range(9, 61):
        for p, r in ((3, 3), (3, 5), (5, 5), (3, 7), (5, 7), (7, 7)):
            if p + r >= n:
                continue
            assert alt_overlap_proportion(n, p, r) >= alt_overlap_lower_bound(n, p, r)


def test_alt_overlap_log_corollary():
    # for rp <= n/2 and p, r >= ln n the proportion exceeds (ln n)^2 / (2n)
    for n in range(12, 200):
        for p, r in ((3, 3), (3, 5), (5, 5), (5, 7), (7, 7), (7, 11)):
            if p * r > n / 2 or p < math.log(n) or p + r >= n:
                continue
            assert alt_overlap_proportion(n, p, r) > math.log(n) ** 2 / (2 * n)


# ---------------------------------------------------------------------------
# conjugate-count identity (exhaustive cross-check in GL4(2))
# ---------------------------------------------------------------------------

def test_conjugate_count_identity_gl42():
    # the number of invariant complementary 2-subspace pairs of a stingray
    # element equals |C_G(g)| / |C_M(g)| for M a pair stabilizer
    from stingraylab.oracle import enumerate_subspaces
    from stingraylab.linalg import gf_rank
    import numpy as np

    G = ClassicalGroup("L", 4, 2)
    elements = group_elements(G)
    cert = _find_stingray_rep(G, 2, elements)
    assert cert is not None
    g = cert.element

    def maps_into(xmat, S):
        from stingraylab.linalg import gf_matmul, Subspace
        img = gf_matmul(G.field, S.basis, xmat)
        return Subspace(G.field, 4, img) == S

    subs = [S for S in enumerate_subspaces(G.field, 4, 2)]
    invariant_pairs = 0
    for i, S1 in enumerate(subs):
        for S2 in subs[i + 1:]:
            stacked = np.vstack([S1.basis, S2.basis])
            if gf_rank(G.field, stacked) != 4:
                continue
            if maps_into(g.a, S1) and maps_into(g.a, S2):
                invariant_pairs += 1

    M = [x for x in elements if maps_into(x, cert.U) and maps_into(x, cert.F)]
    cg = exhaustive_centralizer(elements, g)
    ga = g.a
    cm = sum(1 for x in M
             if np.array_equal(_mm(G.field, x, ga), _mm(G.field, ga, x)))
    assert cg % cm == 0
    assert invariant_pairs == cg // cm


def _mm(field, a, b):
    from stingraylab.linalg import gf_matmul
    return gf_matmul(field, a, b)


def test_rat_str():
    assert rat_str(F(35, 16)) == "35/16"
    assert rat_str(F(20)) == "20/1"
    assert rat_str(512) == "512"
