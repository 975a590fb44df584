import numpy as np
import pytest

from stingraylab.classical import (ClassicalGroup, Sampler, group_order,
                                   invariant_quadratic_form, omega_order,
                                   preserves_form, quad_matrix_on,
                                   standard_form)
from stingraylab.linalg import Mat
from stingraylab.recognize import schreier_sims_order

ALL_TYPES = ["L", "U", "Sp", "O+", "O-", "Oo"]


def valid_dims(gtype):
    if gtype == "L":
        return [1, 2, 3, 4]
    if gtype == "U":
        return [2, 3, 4]
    if gtype == "Sp":
        return [2, 4]
    if gtype in ("O+", "O-"):
        return [2, 4, 6]
    return [1, 3, 5]


def valid_q(gtype):
    return (3,) if gtype == "Oo" else (2, 3)


def small_cases():
    out = []
    for gtype in ALL_TYPES:
        for q in valid_q(gtype):
            u = 2 if gtype == "U" else 1
            for n in valid_dims(gtype):
                if (q ** u) ** n <= 2 ** 14:
                    out.append((gtype, n, q))
    return out


@pytest.mark.parametrize("gtype,n,q", small_cases(),
                         ids=lambda v: str(v))
def test_order_formulas_match_schreier_sims(gtype, n, q):
    G = ClassicalGroup(gtype, n, q)
    assert schreier_sims_order(G.generators,
                               upper_bound=G.order) == G.order
    assert schreier_sims_order(G.omega_generators,
                               upper_bound=G.omega_order) == G.omega_order


def test_known_orders():
    assert group_order("L", 4, 2) == 20160
    assert group_order("Sp", 4, 2) == 720
    assert group_order("U", 3, 2) == 648
    assert omega_order("L", 4, 2) == 20160
    assert omega_order("Sp", 4, 2) == 720
    assert omega_order("Oo", 1, 3) == 1
    assert omega_order("O+", 6, 2) == group_order("O+", 6, 2) // 2
    assert omega_order("O-", 6, 3) == group_order("O-", 6, 3) // 4


@pytest.mark.parametrize("gtype,n,q", [(t, n, q) for t in ALL_TYPES
                                       for q in valid_q(t)
                                       for n in valid_dims(t)[-1:]],
                         ids=lambda v: str(v))
def test_generators_preserve_form(gtype, n, q):
    G = ClassicalGroup(gtype, n, q)
    for g in G.generators + G.omega_generators:
        assert preserves_form(g, G)


def test_orthogonal_generators_preserve_quadratic_form():
    for gtype in ("O+", "O-", "Oo"):
        for q in valid_q(gtype):
            n = 5 if gtype == "Oo" else 6
            G = ClassicalGroup(gtype, n, q)
            form = standard_form(gtype, n, q)
            F = G.field
            for g in G.generators:
                assert np.array_equal(quad_matrix_on(F, form.quad, g.a),
                                      form.quad)


def test_invariant_quadratic_form_recovered():
    # an orthogonal group inside its own symplectic polar form reveals the
    # quadratic form it preserves, with the right type
    from stingraylab.classical import quadratic_space_type
    for gtype, eps in (("O+", "plus"), ("O-", "minus")):
        G = ClassicalGroup(gtype, 4, 2)
        form = standard_form(gtype, 4, 2)
        qf = invariant_quadratic_form(G.generators, Mat(G.field, form.gram))
        assert qf is not None
        assert quadratic_space_type(G.field, qf) == eps


def test_full_symplectic_has_no_invariant_quadratic_form():
    G = ClassicalGroup("Sp", 4, 2)
    form = standard_form("Sp", 4, 2)
    assert invariant_quadratic_form(G.generators,
                                    Mat(G.field, form.gram)) is None


def test_sampler_deterministic_and_in_group():
    G = ClassicalGroup("Sp", 4, 3)
    s1 = Sampler(G, seed=5)
    s2 = Sampler(G, seed=5)
    for _ in range(10):
        a = s1.sample()
        b = s2.sample()
        assert np.array_equal(a.a, b.a)
        assert preserves_form(a, G)


def test_sampler_omega_stays_in_omega():
    G = ClassicalGroup("L", 3, 3)
    s = Sampler(G, which="omega", seed=1)
    omega = omega_order("L", 3, 3)
    gens = [s.sample() for _ in range(6)]
    N = schreier_sims_order(gens, upper_bound=group_order("L", 3, 3))
    assert omega % N == 0 or N <= omega


def test_exact_uniform_rejected_outside_L():
    G = ClassicalGroup("Sp", 4, 2)
    with pytest.raises(ValueError):
        Sampler(G, exact_uniform=True)


def test_tiny_orthogonal_groups():
    # n <= 2 orthogonal groups built by exhaustive isometry enumeration
    for gtype, n, q, expect_full in (("O+", 2, 2, 2), ("O-", 2, 2, 6),
                                     ("O+", 2, 3, 4), ("O-", 2, 3, 8),
                                     ("Oo", 1, 3, 2)):
        G = ClassicalGroup(gtype, n, q)
        assert G.order == expect_full
        assert schreier_sims_order(G.generators,
                                   upper_bound=G.order) == G.order


def bigger_cases():
    out = []
    dims = {"L": [5, 6], "U": [5], "Sp": [6, 8], "O+": [8], "O-": [8],
            "Oo": [7]}
    for gtype, ns in dims.items():
        for q in valid_q(gtype):
            u = 2 if gtype == "U" else 1
            for n in ns:
                if (q ** u) ** n <= 2 ** 18:
                    out.append((gtype, n, q))
    return out


@pytest.mark.slow
@pytest.mark.parametrize("gtype,n,q", bigger_cases(), ids=lambda v: str(v))
def test_order_formulas_larger_grid(gtype, n, q):
    G = ClassicalGroup(gtype, n, q)
    assert schreier_sims_order(G.generators,
                               upper_bound=G.order) == G.order
    assert schreier_sims_order(G.omega_generators,
                               upper_bound=G.omega_order) == G.omega_order
