"""Brute-force oracle checks and oracle-vs-formula agreement."""

from fractions import Fraction

import numpy as np
import pytest

from stingraylab import classical
from stingraylab.classical import ClassicalGroup
from stingraylab.counting import (class_size_per_subspace, num_subspaces,
                                  centralizer_order)
from stingraylab.linalg import Mat, charpoly
from stingraylab.oracle import (cached, count_complement_pairs,
                                count_nondegenerate, enumerate_subspaces,
                                exhaustive_centralizer,
                                exhaustive_class_count, exhaustive_rho_gen,
                                group_elements, _find_stingray_rep)
from stingraylab.recognize import generation_verdict
from stingraylab.stingray import classify_stingray, form_duo


F = Fraction


# ---------------------------------------------------------------------------
# subspace enumeration
# ---------------------------------------------------------------------------

def test_enumerate_subspaces_counts_and_uniqueness():
    G2 = ClassicalGroup("L", 4, 2)
    subs = list(enumerate_subspaces(G2.field, 4, 2))
    assert len(subs) == 35
    assert len(set(subs)) == 35
    assert all(S.dim == 2 for S in subs)

    pts = list(enumerate_subspaces(G2.field, 3, 1))
    assert len(pts) == len(set(pts)) == 7

    G3 = ClassicalGroup("L", 2, 3)
    assert len(list(enumerate_subspaces(G3.field, 2, 1))) == 4


def test_enumerate_subspaces_guard():
    G = ClassicalGroup("L", 30, 2)
    with pytest.raises(ValueError):
        list(enumerate_subspaces(G.field, 30, 15))


def test_count_nondegenerate_values():
    res = count_nondegenerate(4, 2, 2, "Sp")
    assert res.value == 20
    assert res.universe == 35
    # minus-type filter agrees with the closed-form count
    minus = count_nondegenerate(4, 2, 2, "O+", "minus")
    assert minus.value == num_subspaces(4, 2, 2, "O+")
    # the full space is nondegenerate
    assert count_nondegenerate(4, 2, 4, "Sp").value == 1
    assert count_nondegenerate(4, 2, 4, "O+", "plus").value == 1
    assert count_nondegenerate(4, 2, 4, "O-", "minus").value == 1


def test_count_complement_pairs_L():
    res = count_complement_pairs(4, 2, 2, "L")
    assert res.value["pairs"] == 560
    assert res.value["k"] == "16/35"
    assert res.universe == 35 * 35


def test_count_complement_pairs_Sp_bound():
    res = count_complement_pairs(4, 2, 2, "Sp")
    k = F(res.value["k"])
    assert F(1, 4) <= k < 1            # 1 - 3/(2q) at q = 2
    assert res.value["num_e"] == 20


def test_count_complement_pairs_degenerate_guard():
    with pytest.raises(ValueError):
        count_complement_pairs(2, 2, 1, "Sp")   # all 1-spaces isotropic


# ---------------------------------------------------------------------------
# element enumeration
# ---------------------------------------------------------------------------

def test_group_elements_sizes():
    gl32 = ClassicalGroup("L", 3, 2)
    assert len(group_elements(gl32)) == 168
    sp42 = ClassicalGroup("Sp", 4, 2)
    assert len(group_elements(sp42)) == 720
    # omega subgroup of O+4(2) has index 4
    o4 = ClassicalGroup("O+", 4, 2)
    assert len(group_elements(o4, omega=True)) == o4.omega_order


def test_exhaustive_centralizers_gl42():
    G = ClassicalGroup("L", 4, 2)
    elements = group_elements(G)
    c3 = _find_stingray_rep(G, 3, elements)
    c2 = _find_stingray_rep(G, 2, elements)
    assert exhaustive_centralizer(elements, c3.element) == 7
    assert exhaustive_centralizer(elements, c2.element) == 18
    assert centralizer_order(4, 2, 3, "L") == 7
    assert centralizer_order(4, 2, 2, "L") == 18


def test_exhaustive_centralizer_sp42():
    G = ClassicalGroup("Sp", 4, 2)
    elements = group_elements(G)
    c2 = _find_stingray_rep(G, 2, elements)
    assert exhaustive_centralizer(elements, c2.element) == 18


def test_exhaustive_class_count_pair_and_per_subspace():
    G = ClassicalGroup("L", 4, 2)
    elements = group_elements(G)
    cert = _find_stingray_rep(G, 2, elements)
    # exactly c(4,2,2,L) = 2 elements share one (moved, fixed) pair
    assert exhaustive_class_count(G, cert.U, 2, elements, fixed=cert.F) == 2
    # dropping the fixed-space pin counts all q^(e1*e2) = 16 complements
    assert exhaustive_class_count(G, cert.U, 2, elements) == 2 * 16
    assert class_size_per_subspace(4, 2, 2, "L") == 2


def test_exhaustive_rho_gen_gl42():
    res = exhaustive_rho_gen(ClassicalGroup("L", 4, 2), 2, 2, seed=0)
    assert res.value["duos"] == 512
    assert F(res.value["rho"]) == F(res.value["gen"], res.value["duos"])
    assert F(res.value["rho"]) == F(9, 64)
    # complementarity of generation and non-generation proportions
    rho_nongen = 1 - F(res.value["rho"])
    assert rho_nongen == F(res.value["duos"] - res.value["gen"],
                           res.value["duos"])


def test_exhaustive_rho_gen_sp43_has_no_degree_2_class():
    with pytest.raises(ValueError):
        exhaustive_rho_gen(ClassicalGroup("Sp", 4, 3), 2, 2)


@pytest.mark.slow
def test_nongenerating_duos_fix_perp_in_sp42():
    # every non-generating duo at this tiny scale pairs a moved space with
    # the perp of the other, i.e. the witnesses are reducible on V_d
    G = ClassicalGroup("Sp", 4, 2)
    elements = group_elements(G)
    c1 = _find_stingray_rep(G, 2, elements)
    ref_poly = charpoly(c1.element)
    checked = 0
    for x in elements:
        g2 = Mat(G.field, x)
        if charpoly(g2) != ref_poly:
            continue
        cert2 = classify_stingray(g2, G)
        if cert2 is None or cert2.e != 2:
            continue
        duo = form_duo(c1, cert2, G)
        if duo is None:
            continue
        verdict = generation_verdict(duo, G, seed=0)
        checked += 1
        if not verdict.generating:
            assert cert2.U == classical.perp(c1.U, G)
    assert checked > 0


# ---------------------------------------------------------------------------
# oracle vs formula on a tiny grid
# ---------------------------------------------------------------------------

def _valid_degrees(gtype, d):
    if gtype == "L":
        return list(range(1, d))
    if gtype == "U":
        return [e for e in range(1, d) if e % 2]
    return [e for e in range(2, d, 2)]


@pytest.mark.parametrize("gtype,q,dmax", [
    ("L", 2, 6), ("L", 3, 5), ("U", 2, 5), ("Sp", 2, 6), ("Sp", 3, 4),
    ("O+", 2, 6), ("O-", 2, 6), ("O+", 3, 4), ("O-", 3, 4),
])
def test_num_subspaces_matches_oracle(gtype, q, dmax):
    for d in range(2, dmax + 1):
        if gtype in ("Sp", "O+", "O-") and d % 2:
            continue
        group = ClassicalGroup(gtype, d, q)
        for e in _valid_degrees(gtype, d):
            if gtype == "L":
                from stingraylab.oracle import _gauss_binomial
                got = len(list(enumerate_subspaces(group.field, d, e)))
                assert got == num_subspaces(d, q, e, "L")
                continue
            filt = "minus" if gtype in ("O+", "O-") else None
            res = count_nondegenerate(d, q, e, gtype, filt)
            assert res.value == num_subspaces(d, q, e, gtype), (gtype, d, q, e)


@pytest.mark.slow
@pytest.mark.parametrize("gtype,d,q,e", [
    ("L", 4, 2, 2), ("L", 4, 2, 3), ("L", 3, 3, 3),
    ("Sp", 4, 2, 2), ("U", 3, 3, 3), ("O+", 4, 2, 2), ("O-", 4, 2, 2),
])
def test_class_sizes_match_oracle(gtype, d, q, e):
    group = ClassicalGroup(gtype, d, q)
    elements = group_elements(group)
    cert = _find_stingray_rep(group, e, elements)
    if cert is None:
        pytest.skip("no stingray class at these parameters")
    assert exhaustive_centralizer(elements, cert.element) == \
        centralizer_order(d, q, e, gtype)
    assert exhaustive_class_count(group, cert.U, e, elements, fixed=cert.F,
                                  poly=charpoly(cert.element)) == \
        class_size_per_subspace(d, q, e, gtype)


@pytest.mark.slow
def test_duo_partner_count_matches_oracle_sp42():
    from stingraylab.counting import duo_partner_count
    G = ClassicalGroup("Sp", 4, 2)
    elements = group_elements(G)
    c1 = _find_stingray_rep(G, 2, elements)
    ref_poly = charpoly(c1.element)
    partners = 0
    for x in elements:
        g2 = Mat(G.field, x)
        if charpoly(g2) != ref_poly:
            continue
        cert2 = classify_stingray(g2, G)
        if cert2 is None or cert2.e != 2:
            continue
        if form_duo(c1, cert2, G) is not None:
            partners += 1
    lo, hi = duo_partner_count(4, 2, 2, "Sp")
    assert lo <= partners <= hi


# ---------------------------------------------------------------------------
# disk cache
# ---------------------------------------------------------------------------

def test_cached_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("STINGRAY_ORACLE_CACHE", str(tmp_path))
    r1 = cached(count_nondegenerate, "count_nondegenerate",
                d=4, q=2, e=2, gtype="Sp")
    assert r1.value == 20
    files = list(tmp_path.rglob("*.json"))
    assert files
    # second call is served from disk and reports the same value
    r2 = cached(count_nondegenerate, "count_nondegenerate",
                d=4, q=2, e=2, gtype="Sp")
    assert r2.value == r1.value
