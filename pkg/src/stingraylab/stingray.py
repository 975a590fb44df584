"""Detection, construction, and certification of stingray elements and duos.

A stingray element g of GX_d(q) moves an e-dimensional subspace U
irreducibly, fixes a complement F pointwise, and has order divisible by a
prime r whose multiplicative order modulo the field size is exactly e (a
"primitive prime divisor" prime).  Two stingray elements whose moved spaces
intersect trivially form a stingray duo; restricted to U1 + U2 they are
candidate generators of a classical group of dimension e1 + e2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import classical
from .gf import PolyGF, element_order, factor_integer, factor_poly, ppd_set
from .linalg import (Mat, Subspace, charpoly, fixed_space,
                     is_complement_pair, is_direct_sum, moved_space, restrict)


@dataclass(frozen=True)
class StingrayCertificate:
    """Witness that ``element`` is an e-ppd stingray element."""
    element: Mat
    e: int
    r: int
    U: Subspace                   # moved space, acted on irreducibly
    F: Subspace                   # fixed space, complementary to U
    irreducible_factor: PolyGF

    @property
    def d(self) -> int:
        return self.element.nrows

    def to_record(self) -> dict:
        """JSON-ready record for CLI output."""
        return {
            "e": self.e,
            "r": self.r,
            "order": int(_exact_order(self.element, self.element.field, self.e)),
            "U_basis": self.U.basis.tolist(),
            "F_basis": self.F.basis.tolist(),
            "element": self.element.a.tolist(),
        }


@dataclass(frozen=True)
class DuoReport:
    """A pair of stingray elements with independent moved spaces."""
    cert1: StingrayCertificate
    cert2: StingrayCertificate
    d: int
    Vd_basis: Subspace
    restricted_pair: tuple[Mat, Mat]
    target_type: str


def _exact_order(g: Mat, F, e: int) -> int:
    """Order of a powered stingray element; divides |field|^e - 1."""
    return element_order(g, factor_integer(F.order ** e - 1))


def _is_t_minus_one(f: PolyGF) -> bool:
    F = f.field
    return f.degree == 1 and f.coeffs[0] == F.neg_table[1] and f.coeffs[1] == 1


def classify_stingray(g: Mat, group) -> StingrayCertificate | None:
    """Certificate iff g is a stingray element of the group, else None.

    Requires charpoly(g) = f(t) (t-1)^(d-e) with f irreducible of degree e,
    moved and fixed spaces complementary, and the order of g divisible by a
    prime r with multiplicative order e modulo the field size.  In form
    groups the moved space must additionally be nondegenerate with
    perpendicular fixed space (minus type when the ambient is orthogonal);
    these properties come for free for honest stingray elements but are
    checked rather than assumed.
    """
    F = g.field
    d = g.nrows
    factors = factor_poly(charpoly(g))
    f = None
    e = 0
    for fac, mult in factors:
        if _is_t_minus_one(fac):
            continue
        if f is not None or mult != 1:
            return None           # more than one non-trivial block
        f, e = fac, fac.degree
    if f is None or e < 1:
        return None
    ppds = ppd_set(F.order, e)
    if not ppds:
        return None
    U = moved_space(g)
    Fx = fixed_space(g)
    if U.dim != e or Fx.dim != d - e or not is_direct_sum(U, Fx):
        return None
    order = _exact_order(g, F, e)
    divisors = sorted(r for r in ppds if order % r == 0)
    if not divisors:
        return None
    if group.gtype != "L":
        ut = classical.subspace_type(U, group)
        if ut == "degenerate":
            return None
        if group.gtype in ("O+", "O-", "Oo") and ut != "nondegenerate_minus":
            return None
        if classical.perp(U, group) != Fx:
            return None
    return StingrayCertificate(g, e, divisors[0], U, Fx, f)


def stingray_scan(g: Mat, group, e_lo: int, e_hi: int) -> StingrayCertificate | None:
    """Power a random element into a stingray element, if possible.

    Looks for exactly one irreducible charpoly factor whose degree e lies in
    [e_lo, e_hi] and admits a ppd prime, with no other factor of that degree.
    Powers g to kill every other block: the unipotent part dies under
    p^ceil(log_p d) and each remaining semisimple block of degree d' under
    Q^d' - 1.  The survivor is then reduced to prime order r = min ppd.
    """
    if e_lo < 2:
        raise ValueError("e_lo must be at least 2")
    F = g.field
    Q = F.order
    d = g.nrows
    factors = factor_poly(charpoly(g))
    target = None
    others: list[int] = []
    for fac, mult in factors:
        if _is_t_minus_one(fac):
            continue
        e = fac.degree
        if e_lo <= e <= e_hi and ppd_set(Q, e):
            if target is not None or mult > 1:
                return None       # ambiguous: two candidate blocks
            target = fac
        else:
            others.append(e)
    if target is None:
        return None
    e = target.degree
    if any(e == d2 for d2 in others):
        return None               # another block of the same degree
    p = F.p
    M = p ** max(1, math.ceil(math.log(d) / math.log(p) - 1e-12))
    while M < d:
        M *= p
    for d2 in set(others):
        M = math.lcm(M, Q ** d2 - 1)
    h = g ** M
    r = min(ppd_set(Q, e))
    if M % r == 0:
        return None               # powering killed the target block too
    order = _exact_order(h, F, e)
    if order % r != 0:
        return None
    h = h ** (order // r)
    return classify_stingray(h, group)


_OMEGA_POWER = {"L": lambda q: q - 1, "U": lambda q: q + 1,
                "Sp": lambda q: 1, "O+": lambda q: 2, "O-": lambda q: 2,
                "Oo": lambda q: 2}


def power_to_omega(cert: StingrayCertificate, group) -> StingrayCertificate:
    """Replace the element by a power lying in the Omega subgroup.

    The exponent m depends only on the group type (q-1 for L, q+1 for U,
    1 for Sp, 2 for orthogonal).  The ppd prime r never divides m, so the
    powered element has the same prime order, moved space, and fixed space.
    """
    m = _OMEGA_POWER[group.gtype](group.q)
    if m % cert.r == 0:
        raise ValueError("omega exponent divisible by the ppd prime")
    h = cert.element ** m
    order = _exact_order(h, h.field, cert.e)
    h = h ** (order // cert.r)
    out = classify_stingray(h, group)
    if out is None or out.U != cert.U or out.F != cert.F:
        raise RuntimeError("powering to Omega changed the certificate spaces")
    return out


_TARGET_FOR = {"L": "L", "U": "U"}


def form_duo(c1: StingrayCertificate, c2: StingrayCertificate,
             group) -> DuoReport | None:
    """Combine two certificates into a duo report, or None.

    Requires the moved spaces to intersect trivially (and their sum to be
    nondegenerate outside type L).  The restrictions of both elements to
    Vd = U1 + U2 are computed in the canonical basis of Vd; the target type
    of the restricted pair follows the ambient type, except that symplectic
    ambients in characteristic 2 aim at an orthogonal group (sign read off
    the invariant quadratic form when one exists) and orthogonal ambients
    get their sign from the type of Vd.
    """
    if c1.element.field != c2.element.field or c1.d != c2.d:
        raise ValueError("certificates come from different groups")
    if c1.e < c2.e:
        c1, c2 = c2, c1
    if not is_complement_pair(c1.U, c2.U):
        return None
    F = group.field
    d = c1.e + c2.e
    Vd = Subspace(F, c1.d, np.concatenate([c1.U.basis, c2.U.basis], axis=0))
    if group.gtype != "L":
        ty = classical.subspace_type(Vd, group)
        if ty == "degenerate":
            return None
    g1 = restrict(c1.element, Vd)
    g2 = restrict(c2.element, Vd)
    gtype = group.gtype
    if gtype in ("L", "U"):
        target = gtype
    elif gtype == "Sp":
        if group.q % 2 == 1:
            target = "Sp"
        else:
            gram_d = classical.form_matrix_on(F, group.gram.a, Vd.basis, False)
            qf = classical.invariant_quadratic_form([g1, g2], Mat(F, gram_d))
            if qf is not None:
                eps = classical.quadratic_space_type(F, qf, group.q)
                target = "O+" if eps == "plus" else "O-"
            else:
                target = "Sp"
    else:
        quad_d = classical.quad_matrix_on(F, group.quad.a, Vd.basis)
        eps = classical.quadratic_space_type(F, quad_d, group.q)
        target = {"plus": "O+", "minus": "O-", "circ": "Oo"}[eps]
    return DuoReport(c1, c2, d, Vd, (g1, g2), target)
