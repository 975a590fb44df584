import numpy as np
import pytest

from stingraylab.classical import ClassicalGroup, Sampler, group_order
from stingraylab.gf import field_create
from stingraylab.linalg import Mat, gf_inverse, gf_matmul
from stingraylab.pipeline import _find_reference, _transport
from stingraylab.recognize import (Verdict, envelope_dim, generation_verdict,
                                   perm_order, schreier_sims_order,
                                   spin_irreducible)
from stingraylab.stingray import form_duo

F2 = field_create(2, 1, 1)


def test_schreier_sims_known_orders():
    G = ClassicalGroup("L", 4, 2)
    assert schreier_sims_order(G.generators) == 20160
    S = ClassicalGroup("Sp", 4, 2)
    assert schreier_sims_order(S.generators) == 720
    assert schreier_sims_order([]) == 1


def test_schreier_sims_lagrange():
    # computed orders divide the ambient order
    for gtype, n, q in (("L", 4, 2), ("Sp", 4, 3), ("U", 3, 2)):
        G = ClassicalGroup(gtype, n, q)
        s = Sampler(G, seed=9)
        gens = [s.sample() for _ in range(2)]
        N = schreier_sims_order(gens, upper_bound=G.order)
        assert G.order % N == 0


def test_perm_order():
    assert perm_order([[1, 2, 0]]) == 3
    # A5 = <(0 1 2), (2 3 4)> on 5 points
    assert perm_order([[1, 2, 0, 3, 4], [0, 1, 3, 4, 2]]) == 60
    # 5-cycle and overlapping 7-cycle on 11 points -> A11
    c5 = list(range(11))
    c5[0], c5[1], c5[2], c5[3], c5[4] = 1, 2, 3, 4, 0
    c7 = list(range(11))
    for i in range(4, 11):
        c7[i] = 4 + (i - 4 + 1) % 7
    assert perm_order([c5, c7]) == 19958400


def test_spin_irreducible_detects_hidden_invariant():
    h = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 0]],
                 dtype=np.int64)
    P = np.array([[1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1]],
                 dtype=np.int64)
    hp = gf_matmul(F2, gf_matmul(F2, gf_inverse(F2, P), h), P)
    ok, wit = spin_irreducible([Mat(F2, hp)])
    assert not ok and wit is not None and 0 < wit.dim < 4
    # the witness is genuinely invariant
    img = gf_matmul(F2, wit.basis, hp)
    from stingraylab.linalg import Subspace
    assert Subspace(F2, 4, np.concatenate([wit.basis, img])) == wit


def test_spin_irreducible_field_extension_module():
    # companion matrix of an irreducible cubic: irreducible module whose
    # endomorphism ring is GF(8)
    c = Mat(F2, np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]], dtype=np.int64))
    assert spin_irreducible([c])[0]
    assert envelope_dim([c]) == 3  # algebra is the field GF(8)


def test_spin_irreducible_full_group_generators():
    for gtype, n, q in (("L", 4, 2), ("Sp", 6, 2), ("U", 3, 3), ("O-", 6, 2)):
        G = ClassicalGroup(gtype, n, q)
        assert spin_irreducible(G.generators)[0]


def _sampled_duo(G, e1, e2, seed):
    ref1 = _find_reference(G, e1, seed)
    ref2 = _find_reference(G, e2, seed + 1)
    s = Sampler(G, seed=seed + 2)
    for _ in range(200):
        c1 = _transport(ref1, s.sample(), G)
        c2 = _transport(ref2, s.sample(), G)
        duo = form_duo(c1, c2, G)
        if duo is not None:
            return duo
    raise RuntimeError("no duo")


def test_generation_verdict_contains_omega():
    G = ClassicalGroup("L", 4, 2)
    for seed in range(8):
        duo = _sampled_duo(G, 2, 2, 100 + seed)
        v = generation_verdict(duo, G)
        assert v.tag in ("ContainsOmega", "ProperSubgroup")
        if v.tag == "ContainsOmega":
            assert v.witness_order % v.target_order == 0
            assert v.generating
            return
    pytest.skip("no generating duo sampled (unexpected)")


def test_generation_verdict_proper_subgroup_possible():
    G = ClassicalGroup("L", 4, 2)
    tags = set()
    for seed in range(25):
        duo = _sampled_duo(G, 2, 2, 300 + seed)
        v = generation_verdict(duo, G)
        tags.add(v.tag)
        assert group_order("L", 4, 2) % v.witness_order == 0
    assert "ProperSubgroup" in tags and "ContainsOmega" in tags


def test_verdict_monotone_under_extra_generator():
    # adding a full-group generator never demotes the verdict
    G = ClassicalGroup("L", 4, 2)
    duo = _sampled_duo(G, 2, 2, 500)
    gens = list(duo.restricted_pair) + [G.generators[0]]
    N = schreier_sims_order(gens, upper_bound=G.order)
    v = generation_verdict(duo, G)
    if v.tag == "ContainsOmega":
        assert N % v.target_order == 0


def test_sp_even_q_orthogonal_in_sp_counts_as_generating():
    v = Verdict("OrthogonalInSp", "O-", 10, 5, True, eps=-1)
    assert v.generating
    v2 = Verdict("ProperSubgroup", "Sp", 10, 720, False)
    assert not v2.generating
