"""Brute-force ground truth on tiny parameters.

Everything here is exhaustive: subspace enumeration in canonical echelon
order, element enumeration by closure from generators, and duo scans that
apply the recognition verdict to every partner.  Guards keep the work
bounded (10^7 subspaces, 2*10^6 group elements); results are cached on disk
keyed by parameters and a hash of the package source.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from dataclasses import dataclass, asdict
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import classical
from .classical import ClassicalGroup
from .gf import FieldSpec
from .linalg import Mat, Subspace, gf_matmul, gf_identity, gf_rank, charpoly
from .recognize import generation_verdict
from .stingray import classify_stingray, form_duo

SUBSPACE_GUARD = 10 ** 7
ELEMENT_GUARD = 2 * 10 ** 6


@dataclass
class OracleResult:
    formula: str
    params: dict
    value: object
    universe: int
    seconds: float

    def to_json_dict(self) -> dict:
        out = asdict(self)
        if isinstance(self.value, Fraction):
            out["value"] = f"{self.value.numerator}/{self.value.denominator}"
        return out


# ---------------------------------------------------------------------------
# subspace enumeration
# ---------------------------------------------------------------------------

def _gauss_binomial(d: int, e: int, Q: int) -> int:
    num = den = 1
    for i in range(e):
        num *= Q ** (d - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(F: FieldSpec, d: int, e: int):
    """Yield every e-subspace of F^d exactly once (canonical echelon form).

    For each choice of pivot columns, the free entries (right of the pivot,
    outside later pivot columns) range over the field.
    """
    Q = F.order
    total = _gauss_binomial(d, e, Q)
    if total > SUBSPACE_GUARD:
        raise ValueError(f"{total} subspaces exceeds the enumeration guard")
    if e == 0:
        yield Subspace(F, d, np.zeros((0, d), dtype=np.int64))
        return
    for pivots in itertools.combinations(range(d), e):
        free = [(i, j) for i in range(e) for j in range(pivots[i] + 1, d)
                if j not in pivots]
        base = np.zeros((e, d), dtype=np.int64)
        for i, c in enumerate(pivots):
            base[i, c] = 1
        for vals in itertools.product(range(Q), repeat=len(free)):
            M = base.copy()
            for (i, j), v in zip(free, vals):
                M[i, j] = v
            yield Subspace(F, d, M)


def count_nondegenerate(d: int, q: int, e: int, gtype: str,
                        type_filter: str | None = None) -> OracleResult:
    """Count nondegenerate e-subspaces under the standard form of gtype.

    type_filter restricts orthogonal subspaces to 'plus'/'minus'/'circ'.
    """
    t0 = time.time()
    group = ClassicalGroup(gtype, d, q)
    want = "nondegenerate" if type_filter is None else f"nondegenerate_{type_filter}"
    total = 0
    universe = 0
    for U in enumerate_subspaces(group.field, d, e):
        universe += 1
        ty = classical.subspace_type(U, group)
        if ty == "degenerate":
            continue
        if type_filter is None:
            if ty.startswith("nondegenerate"):
                total += 1
        elif ty == want:
            total += 1
    return OracleResult("count_nondegenerate",
                        {"d": d, "q": q, "e": e, "X": gtype,
                         "filter": type_filter},
                        total, universe, time.time() - t0)


def _valid_spaces(group: ClassicalGroup, e: int) -> list[Subspace]:
    """The set U(d, q^u, e, X): all e-spaces for L, nondegenerate for Sp/U,
    nondegenerate minus-type for orthogonal ambients."""
    out = []
    for U in enumerate_subspaces(group.field, group.n, e):
        if group.gtype == "L":
            out.append(U)
            continue
        ty = classical.subspace_type(U, group)
        if group.gtype in ("Sp", "U"):
            if ty == "nondegenerate":
                out.append(U)
        elif ty == "nondegenerate_minus":
            out.append(U)
    return out


def count_complement_pairs(d: int, q: int, e: int, gtype: str) -> OracleResult:
    """|D(d,q^u,e,X)| by double loop, plus the measured proportion k."""
    t0 = time.time()
    group = ClassicalGroup(gtype, d, q)
    first = _valid_spaces(group, e)
    second = first if 2 * e == d else _valid_spaces(group, d - e)
    if not first or not second:
        raise ValueError("no valid subspaces at these parameters")
    pairs = 0
    for U in first:
        for W in second:
            stacked = np.concatenate([U.basis, W.basis], axis=0)
            if gf_rank(group.field, stacked) == d:
                pairs += 1
    k = Fraction(pairs, len(first) * len(second))
    return OracleResult("count_complement_pairs",
                        {"d": d, "q": q, "e": e, "X": gtype},
                        {"pairs": pairs, "k": f"{k.numerator}/{k.denominator}",
                         "num_e": len(first), "num_rest": len(second)},
                        len(first) * len(second), time.time() - t0)


# ---------------------------------------------------------------------------
# element enumeration
# ---------------------------------------------------------------------------

def group_elements(group: ClassicalGroup, omega: bool = False) -> list[np.ndarray]:
    """All elements as matrices, by breadth-first closure from generators."""
    target = group.omega_order if omega else group.order
    if target > ELEMENT_GUARD:
        raise ValueError(f"group order {target} exceeds the element guard")
    F = group.field
    gens = group.omega_generators if omega else group.generators
    n = group.n
    seen = {gf_identity(n).tobytes(): gf_identity(n)}
    frontier = [gf_identity(n)]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = gf_matmul(F, a, g.a)
                key = b.tobytes()
                if key not in seen:
                    seen[key] = b
                    new.append(b)
        frontier = new
    if len(seen) != target:
        raise RuntimeError(f"enumerated {len(seen)} elements, expected {target}")
    return list(seen.values())


def exhaustive_centralizer(elements: list[np.ndarray], g: Mat) -> int:
    """Number of listed elements commuting with g."""
    F = g.field
    ga = g.a
    count = 0
    for x in elements:
        if np.array_equal(gf_matmul(F, x, ga), gf_matmul(F, ga, x)):
            count += 1
    return count


def exhaustive_class_count(group: ClassicalGroup, U: Subspace, e: int,
                           elements: list[np.ndarray] | None = None,
                           fixed: Subspace | None = None,
                           poly=None) -> int:
    """e-stingray elements of the group whose moved space is exactly U.

    Passing `fixed` additionally pins the fixed space, counting the elements
    supported on one particular (moved, fixed) pair.  Passing `poly` pins
    the characteristic polynomial, restricting the count to one conjugacy
    class (classes of stingray elements are separated by their irreducible
    factor, so several classes can share a moved space).
    """
    if elements is None:
        elements = group_elements(group)
    F = group.field
    count = 0
    for x in elements:
        g = Mat(F, x)
        if poly is not None and charpoly(g) != poly:
            continue
        cert = classify_stingray(g, group)
        if cert is not None and cert.e == e and cert.U == U:
            if fixed is None or cert.F == fixed:
                count += 1
    return count


# ---------------------------------------------------------------------------
# exhaustive generation proportion
# ---------------------------------------------------------------------------

def _find_stingray_rep(group: ClassicalGroup, e: int,
                       elements: list[np.ndarray]):
    F = group.field
    for x in elements:
        cert = classify_stingray(Mat(F, x), group)
        if cert is not None and cert.e == e:
            return cert
    return None


def exhaustive_rho_gen(group: ClassicalGroup, e1: int, e2: int,
                       seed: int = 0) -> OracleResult:
    """Exact generating-duo proportion by scanning all partners of one g1.

    Fixing one representative of the e1-class is valid because the count of
    partners and the generation proportion are class functions.  Partners
    are the e2-stingray elements with the same characteristic polynomial as
    a chosen e2-representative (stingray classes are determined by the
    irreducible factor) whose moved space complements U_{g1}.
    """
    t0 = time.time()
    if group.field.order ** group.n > 2 ** 20:
        raise ValueError("action size beyond the recognition guard")
    elements = group_elements(group)
    c1 = _find_stingray_rep(group, e1, elements)
    c2ref = _find_stingray_rep(group, e2, elements)
    if c1 is None or c2ref is None:
        raise ValueError(f"no {e1}/{e2}-stingray elements in {group}")
    ref_poly = charpoly(c2ref.element)
    F = group.field
    duo_count = 0
    gen_count = 0
    for x in elements:
        g2 = Mat(F, x)
        if charpoly(g2) != ref_poly:
            continue
        cert2 = classify_stingray(g2, group)
        if cert2 is None or cert2.e != e2:
            continue
        duo = form_duo(c1, cert2, group)
        if duo is None:
            continue
        duo_count += 1
        verdict = generation_verdict(duo, group, seed=seed)
        if verdict.generating:
            gen_count += 1
    rho = Fraction(gen_count, duo_count) if duo_count else Fraction(0)
    return OracleResult("exhaustive_rho_gen",
                        {"X": group.gtype, "d": group.n, "q": group.q,
                         "e1": e1, "e2": e2},
                        {"gen": gen_count, "duos": duo_count,
                         "rho": f"{rho.numerator}/{rho.denominator}"},
                        len(elements), time.time() - t0)


# ---------------------------------------------------------------------------
# disk cache
# ---------------------------------------------------------------------------

def _code_hash() -> str:
    here = Path(__file__).parent
    h = hashlib.sha256()
    for name in sorted(p.name for p in here.glob("*.py")):
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


def cache_dir() -> Path:
    root = os.environ.get("STINGRAY_ORACLE_CACHE",
                          os.path.join(os.path.expanduser("~"),
                                       ".cache", "stingraylab"))
    p = Path(root)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cached(fn, formula: str, **params) -> OracleResult:
    """Run an oracle through the disk cache."""
    key = hashlib.sha256(
        json.dumps({"formula": formula, "params": params,
                    "code": _code_hash()}, sort_keys=True).encode()).hexdigest()
    path = cache_dir() / f"{key}.json"
    if path.exists():
        rec = json.loads(path.read_text())
        return OracleResult(**rec)
    result = fn(**params)
    path.write_text(json.dumps(result.to_json_dict()))
    return result
