import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stingraylab.gf import (FieldSpec, PolyGF, element_order, factor_integer,
                            factor_poly, field_create, ppd_set)


FIELDS = [field_create(2, 1, 1), field_create(3, 1, 1),
          field_create(2, 1, 2), field_create(3, 1, 2),
          field_create(2, 2, 1), field_create(5, 1, 1)]


@pytest.fixture(params=FIELDS, ids=lambda F: f"GF{F.order}")
def F(request):
    return request.param


def test_field_sizes(F):
    assert F.order == F.p ** (F.a * F.u)


def test_add_group(F):
    n = F.order
    a = np.arange(n)
    assert np.array_equal(F.add_table[a, 0], a)
    assert np.array_equal(F.add_table[a, F.neg_table[a]], np.zeros(n, dtype=np.int64))
    # commutativity
    assert np.array_equal(F.add_table, F.add_table.T)


def test_mul_group(F):
    n = F.order
    a = np.arange(1, n)
    assert np.array_equal(F.mul_table[a, 1], a)
    assert np.array_equal(F.mul_table[a, F.inv_table[a]], np.ones(n - 1, dtype=np.int64))
    assert np.array_equal(F.mul_table, F.mul_table.T)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_distributive(data):
    F = data.draw(st.sampled_from(FIELDS))
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    lhs = F.mul_table[a, F.add_table[b, c]]
    rhs = F.add_table[F.mul_table[a, b], F.mul_table[a, c]]
    assert lhs == rhs


def test_frobenius_is_field_automorphism(F):
    n = F.order
    for a in range(n):
        for b in range(0, n, max(1, n // 5)):
            assert F.frob_table[F.add_table[a, b]] == \
                F.add_table[F.frob_table[a], F.frob_table[b]]
            assert F.frob_table[F.mul_table[a, b]] == \
                F.mul_table[F.frob_table[a], F.frob_table[b]]


def test_conjugation_fixes_subfield():
    F = field_create(3, 1, 2)  # GF(9) over GF(3)
    fixed = [x for x in range(F.order) if F.conj_table[x] == x]
    assert len(fixed) == 3


def test_pow_code(F):
    for x in range(1, F.order):
        assert F.pow_code(x, F.order - 1) == 1
        assert F.pow_code(x, 0) == 1


def test_ppd_examples():
    assert ppd_set(2, 8) == frozenset({17})
    assert ppd_set(2, 6) == frozenset()
    assert ppd_set(3, 2) == frozenset()       # 3+1 is a 2-power
    assert ppd_set(2, 4) == frozenset({5})
    assert ppd_set(9, 3) == frozenset({7, 13})
    assert ppd_set(3, 5) == frozenset({11})


def test_ppd_definition_property():
    for Q in (2, 3, 4, 5, 9):
        for e in range(2, 9):
            for r in ppd_set(Q, e):
                assert (Q ** e - 1) % r == 0
                assert all((Q ** i - 1) % r for i in range(1, e))
                assert r % e == 1


def test_factor_integer():
    f = factor_integer(2 ** 8 - 1)
    assert sorted(f.prime_powers) == [3, 5, 17]
    assert f.n == 255


def test_factor_poly_roundtrip(F):
    rng = np.random.default_rng(7)
    for _ in range(5):
        coeffs = rng.integers(0, F.order, size=6).tolist()
        coeffs[-1] = 1
        f = PolyGF(F, coeffs)
        factors = factor_poly(f)
        prod = PolyGF(F, [1])
        for g, m in factors:
            for _ in range(m):
                prod = prod * g
        assert np.array_equal(prod.coeffs, f.coeffs)
        assert all(g.degree >= 1 for g, _ in factors)


def test_element_order_in_field():
    F = field_create(2, 3, 1)  # GF(8)
    fact = factor_integer(7)

    class El:
        def __init__(self, x):
            self.x = x

        def __pow__(self, n):
            return El(F.pow_code(self.x, n))

        def is_identity(self):
            return self.x == 1

    orders = sorted({element_order(El(x), fact) for x in range(2, F.order)})
    assert orders == [7]
