"""Exact rational evaluation of the subspace/class/duo counting formulas.

Everything is computed with ``fractions.Fraction`` so comparisons against
oracles and bounds are exact.  Cardinalities are asserted integral before
being returned as Python ints.

Conventions: d = e1 + e2; the field of the ambient group has q^u elements
(u = 2 for unitary, 1 otherwise); parity constraints are L: any e,
U: e odd, Sp/O: e even.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .classical import group_order

__all__ = [
    "omega", "delta", "gamma_eps", "num_subspaces",
    "class_size_per_subspace", "centralizer_order", "class_size",
    "duo_partner_count", "rho_gen_lower_bound", "prob_i_upper",
    "alt_overlap_proportion", "alt_overlap_lower_bound",
    "torus_order", "CountReport", "rat_str",
]


def rat_str(x) -> str:
    """Canonical string form of an exact value for JSON output."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True)
class CountReport:
    formula: str
    params: dict
    exact: object | None = None          # Fraction or int
    bounds: tuple | None = None          # (lower, upper) when only bounded

    def to_json_dict(self) -> dict:
        out = {"formula": self.formula, "params": dict(self.params)}
        if self.exact is not None:
            out["exact"] = rat_str(self.exact)
        if self.bounds is not None:
            out["bounds"] = [rat_str(b) for b in self.bounds]
        return out


# ---------------------------------------------------------------------------
# omega / Delta / Gamma
# ---------------------------------------------------------------------------

def omega(k: int, d: int, q: int, sign: int = 1) -> Fraction:
    """prod_{i=k}^{d} (1 - (sign*q)^(-i)), exactly."""
    if not (1 <= k <= d) or q < 2 or sign not in (1, -1):
        raise ValueError("need 1 <= k <= d, q >= 2, sign in {1,-1}")
    out = Fraction(1)
    for i in range(k, d + 1):
        out *= 1 - Fraction(1, (sign * q) ** i)
    return out


def delta(k: int, d: int, q: int, sign: int = 1) -> Fraction:
    """omega(k+1,d)/omega(1,d-k) for the signed base sign*q."""
    if not (1 <= k < d):
        raise ValueError("need 1 <= k < d")
    return omega(k + 1, d, q, sign) / omega(1, d - k, q, sign)


def gamma_eps(e1: int, e2: int, q: int, eps: int) -> Fraction:
    """1 - (q^(-e1/2) + eps q^(-e2/2)) / (1 + eps q^(-d/2)); e_i even."""
    if e2 > e1 or q < 2 or eps not in (1, -1):
        raise ValueError("need e2 <= e1, q >= 2, eps in {1,-1}")
    if e1 % 2 or e2 % 2:
        raise ValueError("gamma requires even e1, e2")
    d = e1 + e2
    return _gamma_raw(e1, e2, q, eps)


def _gamma_raw(e1: int, e2: int, q: int, eps: int) -> Fraction:
    """Gamma without the e2 <= e1 ordering; the counting identity below
    holds verbatim for any even pair, so num_subspaces uses this form."""
    d = e1 + e2
    num = Fraction(1, q ** (e1 // 2)) + eps * Fraction(1, q ** (e2 // 2))
    den = 1 + eps * Fraction(1, q ** (d // 2))
    return 1 - num / den


# ---------------------------------------------------------------------------
# parity checks and toruses
# ---------------------------------------------------------------------------

_EPS_TYPES = ("O+", "O-")


def _u_of(gtype: str) -> int:
    return 2 if gtype == "U" else 1


def _check_parity(gtype: str, e: int):
    if gtype == "U" and e % 2 == 0:
        raise ValueError("unitary stingray degrees are odd")
    if gtype in ("Sp", "O+", "O-") and e % 2 == 1:
        raise ValueError("symplectic/orthogonal stingray degrees are even")
    if e < 1:
        raise ValueError("degree must be positive")


def torus_order(gtype: str, e: int, q: int) -> int:
    """|T| for the centralizer torus acting irreducibly on the e-space."""
    _check_parity(gtype, e)
    if gtype == "L":
        return q ** e - 1
    if gtype == "U":
        return q ** e + 1
    return q ** (e // 2) + 1      # Sp and O


def _gauss_binomial(d: int, e: int, q: int) -> int:
    num = den = 1
    for i in range(e):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{what} is not integral: {x}")
    return x.numerator


# ---------------------------------------------------------------------------
# the counting formulas
# ---------------------------------------------------------------------------

def num_subspaces(d: int, q: int, e1: int, gtype: str) -> int:
    """|U(d, q^u, e1, X)|: candidate moved spaces for an e1-stingray element.

    All e1-subspaces for L; nondegenerate e1-subspaces for U and Sp;
    nondegenerate minus-type e1-subspaces for O^eps (counted inside the
    eps-type d-space, so the value depends on the ambient sign).
    """
    e2 = d - e1
    _check_parity(gtype, e1)
    if gtype in ("Sp", "O+", "O-") and d % 2:
        raise ValueError("symplectic/orthogonal ambient dimension must be even")
    if gtype == "L":
        return _gauss_binomial(d, e1, q)
    if gtype == "U":
        val = Fraction(q ** (2 * e1 * e2)) * delta(e1, d, q, -1)
    elif gtype == "Sp":
        val = Fraction(q ** (e1 * e2)) * delta(e1 // 2, d // 2, q * q, 1)
    elif gtype in _EPS_TYPES:
        eps = 1 if gtype == "O+" else -1
        val = (Fraction(q ** (e1 * e2), 2)
               * delta(e1 // 2, d // 2, q * q, 1) * _gamma_raw(e1, e2, q, eps))
    else:
        raise ValueError(f"unsupported type {gtype!r}")
    return _as_int(val, f"|U({d},{q},{e1},{gtype})|")


def class_size_per_subspace(d: int, q: int, e: int, gtype: str) -> int:
    """c(d,q^u,e,X): stingray elements of the class sharing one moved space."""
    _check_parity(gtype, e)
    T = torus_order(gtype, e, q)
    if gtype == "L":
        return group_order("L", e, q) // (q ** e - 1)
    if gtype in ("U", "Sp"):
        full = group_order(gtype, e, q)
    else:
        full = group_order("O-", e, q)   # moved spaces have minus type
    assert full % T == 0
    return full // T


def centralizer_order(d: int, q: int, e: int, gtype: str) -> int:
    """|C_{GX_d(q)}(g)| for an e-ppd stingray element g."""
    _check_parity(gtype, e)
    T = torus_order(gtype, e, q)
    rest = d - e
    if gtype == "L":
        return (q ** e - 1) * group_order("L", rest, q)
    if gtype in ("U", "Sp"):
        return T * group_order(gtype, rest, q)
    # fixed space of an O^eps stingray element has type -eps
    other = "O-" if gtype == "O+" else "O+"
    return T * group_order(other, rest, q)


def class_size(d: int, q: int, e: int, gtype: str) -> int:
    """|g^G| = |GX_d(q)| / |C_G(g)|."""
    full = group_order(gtype, d, q)
    cent = centralizer_order(d, q, e, gtype)
    assert full % cent == 0
    return full // cent


def duo_partner_count(d: int, q: int, e1: int, gtype: str):
    """N(d,q^u,e1,X): duo partners of a fixed e1-stingray element.

    Exact for L (with the exact ratio |C_G(g1)|/N as a second value);
    for the other types the measured proportion k of complementing
    subspaces is only bounded, so a (lower, upper) pair is returned.
    """
    e2 = d - e1
    if gtype == "L":
        N = q ** (2 * e1 * e2) * class_size_per_subspace(d, q, e2, "L")
        ratio = Fraction((q ** e1 - 1) * (q ** e2 - 1), q ** (2 * e1 * e2))
        return N, ratio
    u = _u_of(gtype)
    base = num_subspaces(d, q, e1, gtype) * class_size_per_subspace(d, q, e2, gtype)
    k_lo = 1 - Fraction(3, 2 * q ** u)
    return (k_lo * base, Fraction(base))


# ---------------------------------------------------------------------------
# declarative constants: kappa rows and p(i, X) rows
# ---------------------------------------------------------------------------

def _F(s: str) -> Fraction:
    return Fraction(s)


# Each row: (gtype, q_predicate, e2_predicate, d_predicate, value).
# The first matching row wins; exceptional rows are listed before base rows.
_KAPPA_ROWS = [
    ("O+", lambda q: q in (11, 13, 17), lambda e2: e2 == 2,
     lambda d: d == 32, _F("10.43")),
    ("O+", lambda q: q == 2, lambda e2: e2 == 2, lambda d: True, _F("14.61")),
    ("O+", lambda q: q >= 3, lambda e2: e2 == 2, lambda d: True, _F("3.53")),
    ("Sp", lambda q: q >= 3, lambda e2: e2 == 2, lambda d: True, _F("8.42")),
    ("L",  lambda q: q == 2, lambda e2: True, lambda d: True, _F("0.11")),
    ("L",  lambda q: q >= 3, lambda e2: True, lambda d: True, _F("0.06")),
    ("U",  lambda q: q == 2, lambda e2: True, lambda d: True, _F("5.3e-6")),
    ("U",  lambda q: q >= 3, lambda e2: True, lambda d: True, _F("1.6e-8")),
    ("Sp", lambda q: q == 2, lambda e2: True, lambda d: True, _F("1.15")),
    ("Sp", lambda q: q >= 3, lambda e2: True, lambda d: True, _F("1.52")),
    ("O+", lambda q: q == 2, lambda e2: True, lambda d: True, _F("2.08")),
    ("O+", lambda q: q >= 3, lambda e2: True, lambda d: True, _F("1.54")),
    ("O-", lambda q: q == 2, lambda e2: True, lambda d: True, _F("1.85")),
    ("O-", lambda q: q >= 3, lambda e2: True, lambda d: True, _F("3.02")),
]


def _kappa(gtype: str, q: int, e2: int, d: int) -> Fraction:
    for gt, qp, ep, dp, val in _KAPPA_ROWS:
        if gt == gtype and qp(q) and ep(e2) and dp(d):
            return val
    raise ValueError(f"no kappa row for ({gtype}, q={q})")


def rho_gen_lower_bound(gtype: str, d: int, q: int, e1: int, e2: int) -> Fraction:
    """Lower bound on the proportion of generating duos in a class pair."""
    if d <= 8:
        raise ValueError("the bound requires d > 8")
    if not (2 <= e2 <= e1) or e1 + e2 != d:
        raise ValueError("need 2 <= e2 <= e1 and d = e1 + e2")
    lam = 1 if gtype == "L" else 0
    kappa = _kappa(gtype, q, e2, d)
    return (1 - lam * (Fraction(1, q) + Fraction(1, q * q))
            - kappa * Fraction(1, q ** (d - 3)))


# p(i, X) base table, keyed (i, gtype) -> (value at q = 2, value at q >= 3).
_P_TABLE = {
    (1, "L"): ("0", "0"),
    (1, "U"): ("7.5e-11", "3.3e-17"),
    (1, "Sp"): ("0.008", "1.02e-4"),
    (1, "O+"): ("0.035", "3.1e-4"),
    (1, "O-"): ("0", "0"),
    (2, "L"): ("0", "1.4e-6"),
    (2, "U"): ("9.9e-7", "1.3e-10"),
    (2, "Sp"): ("0", "0"),
    (2, "O+"): ("0", "0.18"),
    (2, "O-"): ("0", "0.18"),
    (3, "L"): ("0.0081", "0.00032"),
    (3, "U"): ("4.3e-6", "1.5e-8"),
    (3, "Sp"): ("0.074", "0.6"),
    (3, "O+"): ("0.279", "0.017"),
    (3, "O-"): ("0.086", "0.006"),
    (5, "L"): ("0", "0.016"),
    (5, "U"): ("0", "6e-14"),
    (5, "Sp"): ("0", "0.91"),
    (5, "O+"): ("0", "1.24"),
    (5, "O-"): ("0", "2.73"),
    (6, "L"): ("0", "2.1e-26"),
    (6, "U"): ("0", "0"),
    (6, "Sp"): ("0", "0.0053"),
    (6, "O+"): ("0", "0.0053"),
    (6, "O-"): ("0", "0"),
    (8, "L"): ("0.092", "0.04"),
    (8, "U"): ("0", "0"),
    (8, "Sp"): ("0", "0"),
    (8, "O+"): ("0", "0"),
    (8, "O-"): ("0", "0"),
    (9, "L"): ("0", "0"),
    (9, "U"): ("0", "0"),
    (9, "Sp"): ("0.399", "0"),
    (9, "O+"): ("1.76", "0.102"),
    (9, "O-"): ("1.76", "0.102"),
}


def _p_constant(i: int, gtype: str, q: int, d: int, e2: int) -> Fraction:
    """p(i, X), with the documented exceptional rows applied."""
    if i in (4, 7):
        return Fraction(0)
    # imprimitive-wreath class for O+ with minimal second degree
    if i == 3 and gtype == "O+" and e2 == 2:
        if q == 2:
            return _F("12.81")
        if q >= 4:
            return _F("2.005")
    # field-extension/tensor class with the d = 32 special parameters
    if i == 6 and gtype in ("Sp", "O+") and q >= 3:
        if d == 32 and e2 == 2 and q in (11, 13, 17):
            return _F("6.9")
    # symplectic-type/extraspecial class vanishing rows for q = 2
    if i == 9 and q == 2:
        if gtype == "O+" and d % 8 in (2, 4):
            return Fraction(0)
        if gtype == "O-" and d % 8 in (0, 6):
            return Fraction(0)
    lo, hi = _P_TABLE[(i, gtype)]
    return _F(lo) if q == 2 else _F(hi)


def prob_i_upper(i: int, gtype: str, q: int, d: int, e1: int, e2: int) -> Fraction:
    """Upper bound on the non-generation probability from subgroup class i."""
    if d <= 8:
        raise ValueError("the bound requires d > 8")
    if not 1 <= i <= 9:
        raise ValueError("class index must be in 1..9")
    lam = 1 if (i == 1 and gtype == "L") else 0
    return (lam * (Fraction(1, q) + Fraction(1, q * q))
            + _p_constant(i, gtype, q, d, e2) * Fraction(1, q ** (d - 3)))


# ---------------------------------------------------------------------------
# alternating-group overlap counts
# ---------------------------------------------------------------------------

def alt_overlap_proportion(n: int, p: int, r: int) -> Fraction:
    """Exact proportion of x in A_n with |support(g)^x meet support(h)| = 1.

    Here g is a p-cycle and h an r-cycle with disjoint supports,
    p <= r primes with p + r < n.
    """
    if p > r or p + r >= n:
        raise ValueError("need p <= r and p + r < n")
    out = Fraction(r * p, n - p + 1)
    for i in range(p - 1):
        out *= Fraction(n - r - i, n - i)
    return out


def alt_overlap_lower_bound(n: int, p: int, r: int) -> Fraction:
    """The closed-form lower bound r p (n - r p) / (n - p + 2)^2."""
    if p > r or p + r >= n:
        raise ValueError("need p <= r and p + r < n")
    return Fraction(r * p * (n - r * p), (n - p + 2) ** 2)
