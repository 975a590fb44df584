"""Classical group descriptors: forms, orders, generators, sampling.

Conventions
-----------
* Group tags: "L", "U", "Sp", "O+", "O-", "Oo" (the last is the odd-dimension
  orthogonal ambient, odd q only).
* Unitary groups of dimension n over GF(q) live inside GL_n(q^2); their field
  has u = 2 and conjugation x -> x^q.
* (Sesqui)linear forms: f(x, y) = x . Gram . sigma(y)^T with sigma = identity
  (L, Sp, O) or the field conjugation (U).
* Quadratic forms are stored as upper-triangular code matrices Quad with
  Q(x) = x . Quad . x^T; the polar bilinear form is Gram = Quad + Quad^T.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gf import FieldSpec, field_create
from .linalg import (Mat, Subspace, gf_matmul, gf_rank, gf_inverse, gf_rref,
                     gf_left_nullspace, gf_identity, fixed_space)

GROUP_TAGS = ("L", "U", "Sp", "O+", "O-", "Oo")
_ORTHOGONAL = ("O+", "O-", "Oo")


def _check_params(gtype: str, n: int, q: int):
    if gtype not in GROUP_TAGS:
        raise ValueError(f"unknown group type {gtype!r}")
    if n < 1:
        raise ValueError("dimension must be positive")
    if gtype in ("Sp", "O+", "O-") and n % 2 != 0:
        raise ValueError(f"{gtype} requires even dimension, got {n}")
    if gtype == "Oo" and (n % 2 == 0 or q % 2 == 0):
        raise ValueError("Oo requires odd dimension and odd q")


def ambient_field(gtype: str, q: int) -> FieldSpec:
    """The matrix-entry field: GF(q^2) for unitary groups, GF(q) otherwise."""
    import sympy
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, a = next(iter(fac.items()))
    return field_create(int(p), int(a), 2 if gtype == "U" else 1)


# ---------------------------------------------------------------------------
# group orders
# ---------------------------------------------------------------------------

def group_order(gtype: str, n: int, q: int) -> int:
    """|GX_n(q)|: the full isometry (or general linear) group order."""
    _check_params(gtype, n, q)
    if gtype == "L":
        out = q ** (n * (n - 1) // 2)
        for i in range(1, n + 1):
            out *= q ** i - 1
        return out
    if gtype == "U":
        out = q ** (n * (n - 1) // 2)
        for i in range(1, n + 1):
            out *= q ** i - (-1) ** i
        return out
    if gtype == "Sp":
        m = n // 2
        out = q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    if gtype in ("O+", "O-"):
        m = n // 2
        eps = 1 if gtype == "O+" else -1
        out = 2 * q ** (m * (m - 1)) * (q ** m - eps)
        for i in range(1, m):
            out *= q ** (2 * i) - 1
        return out
    # Oo, n = 2m+1, q odd
    m = (n - 1) // 2
    out = 2 * q ** (m * m)
    for i in range(1, m + 1):
        out *= q ** (2 * i) - 1
    return out


def omega_order(gtype: str, n: int, q: int) -> int:
    """|Omega_X_n(q)|, the smallest group of the standard normal series."""
    full = group_order(gtype, n, q)
    if gtype == "L":
        return full // (q - 1)
    if gtype == "U":
        return full // (q + 1)
    if gtype == "Sp":
        return full
    # orthogonal: index 2 for even q, 4 for odd q (but GO_1 = {+-1}, Omega_1 = 1)
    if gtype == "Oo" and n == 1:
        return 1
    return full // (2 if q % 2 == 0 else 4)


def isometry_order_for_tag(tag: str, n: int, q: int) -> int:
    """|GX| for a verdict target tag (used as a Schreier-Sims upper bound)."""
    return group_order(tag, n, q)


# ---------------------------------------------------------------------------
# standard forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormData:
    field: FieldSpec
    gram: np.ndarray           # bilinear/sesquilinear Gram, code matrix
    quad: np.ndarray | None    # upper-triangular quadratic form (orthogonal)


def _trace_one_element(F: FieldSpec) -> int:
    """A code delta with absolute trace 1 over GF(2) (even characteristic)."""
    k = F.k
    for c in range(1, F.order):
        t = 0
        x = c
        for _ in range(k):
            t = F.add_table[t, x]
            x = F.mul_table[x, x]
        if t == 1:
            return c
    raise RuntimeError("no trace-one element found")  # pragma: no cover


def _nonsquare_element(F: FieldSpec) -> int:
    squares = {F.mul_table[x, x] for x in range(1, F.order)}
    for c in range(1, F.order):
        if c not in squares:
            return c
    raise RuntimeError("no nonsquare in odd characteristic field")


def standard_form(gtype: str, n: int, q: int) -> FormData:
    """The fixed reference form of each type in the standard basis.

    Sp: block diagonal [[0,1],[-1,0]]; U: identity Hermitian Gram;
    O+: sum of hyperbolic planes x_{2i-1} x_{2i}; O-: hyperbolic planes plus
    one anisotropic 2-block; Oo: hyperbolic planes plus x_n^2; L: zero form.
    """
    _check_params(gtype, n, q)
    F = ambient_field(gtype, q)
    one = 1
    if gtype == "L":
        return FormData(F, np.zeros((n, n), dtype=np.int64), None)
    if gtype == "U":
        return FormData(F, gf_identity(n), None)
    if gtype == "Sp":
        gram = np.zeros((n, n), dtype=np.int64)
        minus_one = F.neg_table[one]
        for i in range(0, n, 2):
            gram[i, i + 1] = one
            gram[i + 1, i] = minus_one
        return FormData(F, gram, None)
    quad = np.zeros((n, n), dtype=np.int64)
    nhyp = n // 2 if gtype == "O+" else (n - 2) // 2 if gtype == "O-" else (n - 1) // 2
    for i in range(nhyp):
        quad[2 * i, 2 * i + 1] = one
    if gtype == "O-":
        i = n - 2
        if q % 2 == 0:
            # x^2 + xy + delta y^2 with absolute trace of delta equal to 1
            quad[i, i] = one
            quad[i, i + 1] = one
            quad[i + 1, i + 1] = _trace_one_element(F)
        else:
            # x^2 - zeta y^2, zeta a nonsquare: anisotropic over GF(q)
            quad[i, i] = one
            quad[i + 1, i + 1] = F.neg_table[_nonsquare_element(F)]
    elif gtype == "Oo":
        quad[n - 1, n - 1] = one
    gram = F.add_table[quad, quad.T]
    return FormData(F, gram, quad)


# ---------------------------------------------------------------------------
# form evaluation helpers
# ---------------------------------------------------------------------------

def _sigma(F: FieldSpec, A: np.ndarray, unitary: bool) -> np.ndarray:
    return F.conj_table[A] if unitary else A


def form_matrix_on(F: FieldSpec, gram: np.ndarray, C: np.ndarray,
                   unitary: bool) -> np.ndarray:
    """Gram of the restricted form in the basis given by the rows of C."""
    return gf_matmul(F, gf_matmul(F, C, gram), _sigma(F, C, unitary).T)


def quad_matrix_on(F: FieldSpec, quad: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Upper-triangular quadratic form in the basis given by rows of C."""
    M = gf_matmul(F, gf_matmul(F, C, quad), C.T)
    k = M.shape[0]
    out = np.zeros_like(M)
    iu = np.triu_indices(k, 1)
    out[iu] = F.add_table[M[iu], M.T[iu]]
    out[np.diag_indices(k)] = M[np.diag_indices(k)]
    return out


def invariant_quadratic_form(gens: list[Mat], gram: Mat) -> np.ndarray | None:
    """A quadratic form polarizing to ``gram`` that all ``gens`` preserve.

    Only meaningful in characteristic 2, where a symplectic form may or may
    not refine to an invariant quadratic form.  The strict upper triangle of
    any such form is forced to be the upper triangle of the Gram matrix, so
    only the diagonal d is unknown; invariance under g pins it down by
    Q(row_i(g)) = d_i, a linear system over the field.  Returns the
    upper-triangular form matrix, or None if the system is inconsistent.
    """
    F = gram.field
    n = gram.nrows
    U = np.triu(gram.a, 1)
    rows = []
    rhs = []
    for g in gens:
        ga = g.a
        # c_i = (g U g^T)_{ii}, the contribution of the fixed off-diagonals
        c = np.diagonal(gf_matmul(F, gf_matmul(F, ga, U), ga.T))
        sq = F.mul_table[ga, ga]          # entrywise squares g_{ij}^2
        A = sq.copy()
        idx = np.diag_indices(n)
        A[idx] = F.sub_table[A[idx], 1]   # coefficient of d_i gets -1
        rows.append(A)
        rhs.append(F.neg_table[c])
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    # solve A d = b over F via RREF of the augmented matrix
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = gf_rref(F, aug)
    if n in pivots:
        return None  # inconsistent
    d = np.zeros(n, dtype=np.int64)
    for r, p in enumerate(pivots):
        d[p] = R[r, n]
    # free variables stay 0; verify (guards against non-pivot coupling)
    if F.sub_table[gf_matmul(F, A, d.reshape(-1, 1)).ravel(), b].any():
        return None
    quad = U.copy()
    quad[np.diag_indices(n)] = d
    for g in gens:
        if not np.array_equal(quad_matrix_on(F, quad, g.a), quad):
            return None
    return quad


def quad_values(F: FieldSpec, quad: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Q(v) for each row v of vecs (vectorized)."""
    Mv = gf_matmul(F, vecs, quad)
    prods = F.mul_table[vecs, Mv]
    out = np.zeros(len(vecs), dtype=np.int64)
    for j in range(vecs.shape[1]):
        out = F.add_table[out, prods[:, j]]
    return out


def perp(U: Subspace, group) -> Subspace:
    """The orthogonal complement of U under the group's form."""
    if group.gtype == "L":
        raise ValueError("perp is undefined for linear groups (no form)")
    F = group.field
    A = gf_matmul(F, group.gram.a, _sigma(F, U.basis, group.gtype == "U").T)
    return Subspace(F, group.n, gf_left_nullspace(F, A))


def preserves_form(g: Mat, group) -> bool:
    """True iff g is an isometry of the group's (quadratic) form."""
    F = group.field
    if group.gtype == "L":
        return g.is_invertible()
    B = group.gram.a
    gB = gf_matmul(F, gf_matmul(F, g.a, B), _sigma(F, g.a, group.gtype == "U").T)
    if not np.array_equal(gB, B):
        return False
    if group.quad is not None:
        M = gf_matmul(F, gf_matmul(F, g.a, group.quad.a), g.a.T)
        if not np.array_equal(M.diagonal(), group.quad.a.diagonal()):
            return False
    return True


# ---------------------------------------------------------------------------
# subspace classification
# ---------------------------------------------------------------------------

def _all_coord_vectors(F: FieldSpec, k: int) -> np.ndarray:
    Q = F.order
    idx = np.arange(Q ** k, dtype=np.int64)
    return np.stack([(idx // Q ** j) % Q for j in range(k)], axis=1)


def quadratic_space_type(F: FieldSpec, quad: np.ndarray, q: int | None = None) -> str:
    """'plus', 'minus', or 'circ' for a nondegenerate quadratic space.

    Even dimension 2m: plus iff the nonzero singular vectors number
    (q^{m-1}+1)(q^m-1); decided by exhaustive count when q^{2m} <= 2^20 and
    by Witt decomposition otherwise.
    """
    k = quad.shape[0]
    if q is None:
        q = F.order
    if k % 2 == 1:
        return "circ"
    m = k // 2
    if q ** k <= 2 ** 20:
        vecs = _all_coord_vectors(F, k)
        nsing = int(np.count_nonzero(quad_values(F, quad, vecs) == 0)) - 1
        if nsing == (q ** (m - 1) + 1) * (q ** m - 1):
            return "plus"
        if nsing == (q ** (m - 1) - 1) * (q ** m + 1):
            return "minus"
        raise ValueError("singular count matches neither type; degenerate form?")
    aniso = _witt_anisotropic_dim(F, quad)
    return "plus" if aniso == 0 else "minus"


def _witt_anisotropic_dim(F: FieldSpec, quad: np.ndarray) -> int:
    """Dimension of the anisotropic kernel of a nondegenerate quadratic form."""
    cur = quad
    while cur.shape[0] > 2:
        v = _find_singular_vector(F, cur)
        if v is None:
            raise ValueError("no singular vector in dimension > 2 nondegenerate form")
        cur = _split_hyperbolic(F, cur, v)
    if cur.shape[0] == 0:
        return 0
    if _find_singular_vector(F, cur) is None:
        return cur.shape[0]
    return 0


def _find_singular_vector(F: FieldSpec, quad: np.ndarray) -> np.ndarray | None:
    """A nonzero v with Q(v) = 0, or None if the form is anisotropic."""
    k = quad.shape[0]
    Q = F.order
    if Q ** k <= 2 ** 18:
        vecs = _all_coord_vectors(F, k)[1:]
        vals = quad_values(F, quad, vecs)
        hits = np.nonzero(vals == 0)[0]
        return vecs[hits[0]] if len(hits) else None
    rng = np.random.default_rng(int.from_bytes(quad.tobytes()[:8], "little"))
    for _ in range(200000):
        v = rng.integers(0, Q, size=k).astype(np.int64)
        if v.any() and quad_values(F, quad, v.reshape(1, -1))[0] == 0:
            return v
    raise RuntimeError("singular vector search exhausted (expected density ~1/q)")


def _split_hyperbolic(F: FieldSpec, quad: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Split off the hyperbolic plane spanned by singular v and a partner.

    Returns the quadratic form on the perpendicular complement.
    """
    k = quad.shape[0]
    B = F.add_table[quad, quad.T]
    pair = gf_matmul(F, B, v.reshape(-1, 1)).ravel()
    idx = int(np.nonzero(pair)[0][0])
    u = np.zeros(k, dtype=np.int64)
    u[idx] = F.inv_table[pair[idx]]          # B(u, v) = 1
    # make u singular: Q(u + mu v) = Q(u) + mu B(u, v) = Q(u) + mu
    mu = F.neg_table[quad_values(F, quad, u.reshape(1, -1))[0]]
    u = F.add_table[u, F.mul_table[mu, v]]
    # complement = vectors orthogonal to both u and v
    A = gf_matmul(F, B, np.stack([u, v]).T)
    comp = gf_left_nullspace(F, A)
    return quad_matrix_on(F, quad, comp)


def subspace_type(U: Subspace, group) -> str:
    """Classify U under the group's form.

    Returns 'degenerate' when U meets its perp; otherwise 'nondegenerate'
    (Sp/U), or 'nondegenerate_plus' / 'nondegenerate_minus' /
    'nondegenerate_circ' for orthogonal groups.
    """
    if U.dim == 0:
        raise ValueError("zero subspace has no type")
    if group.gtype == "L":
        return "nondegenerate"
    F = group.field
    C = U.basis
    B_U = form_matrix_on(F, group.gram.a, C, group.gtype == "U")
    if gf_rank(F, B_U) < U.dim:
        return "degenerate"
    if group.gtype in ("Sp", "U"):
        return "nondegenerate"
    Q_U = quad_matrix_on(F, group.quad.a, C)
    return "nondegenerate_" + quadratic_space_type(F, Q_U, group.q)


# ---------------------------------------------------------------------------
# Witt standard bases
# ---------------------------------------------------------------------------

def _find_vector(F: FieldSpec, k: int, pred, seed_bytes: bytes) -> np.ndarray:
    """Deterministic search for a nonzero vector satisfying pred.

    Scans standard vectors and small sums first, then seeded random vectors.
    """
    eye = gf_identity(k)
    for i in range(k):
        if pred(eye[i]):
            return eye[i].copy()
    for i in range(k):
        for j in range(i + 1, k):
            for lam in range(1, F.order):
                v = eye[i].copy()
                v[j] = lam
                if pred(v):
                    return v
    rng = np.random.default_rng(int.from_bytes(seed_bytes[:8].ljust(8, b"\0"), "little"))
    for _ in range(200000):
        v = rng.integers(0, F.order, size=k).astype(np.int64)
        if v.any() and pred(v):
            return v
    raise RuntimeError("vector search exhausted")


def _norm_solve(F: FieldSpec, target: int) -> int:
    """alpha with alpha^(q+1) = target in GF(q^2) (norm is surjective)."""
    q = F.p ** F.a
    for alpha in range(1, F.order):
        if F.pow_code(alpha, q + 1) == target:
            return alpha
    raise RuntimeError("norm not surjective?")  # pragma: no cover


def _trace_solve(F: FieldSpec, target: int) -> int:
    """mu with mu + mu^q = target in GF(q^2) (trace is surjective)."""
    q = F.p ** F.a
    for mu in range(F.order):
        if F.add_table[mu, F.pow_code(mu, q)] == target:
            return mu
    raise RuntimeError("trace not surjective?")  # pragma: no cover


def symplectic_standard_basis(F: FieldSpec, gram: np.ndarray) -> np.ndarray:
    """Rows (e1,f1,e2,f2,...) with B(e_i,f_i)=1, all other pairings zero."""
    k = gram.shape[0]
    if k % 2 != 0 or gf_rank(F, gram) < k:
        raise ValueError("nondegenerate even-dimensional space required")
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    e = gf_identity(k)[0]
    pair = gf_matmul(F, gram, e.reshape(-1, 1)).ravel()
    idx = int(np.nonzero(pair)[0][0])
    f = np.zeros(k, dtype=np.int64)
    f[idx] = F.inv_table[pair[idx]]               # B(e, f) = 1... sign below
    # our convention: B(x,y) = x gram y^T, want B(e,f) = 1
    val = _bilinear(F, gram, e, f)
    f = F.mul_table[F.inv_table[val], f]
    comp = gf_left_nullspace(F, gf_matmul(F, gram, np.stack([e, f]).T))
    sub = symplectic_standard_basis(F, form_matrix_on(F, gram, comp, False))
    rest = gf_matmul(F, sub, comp) if len(comp) else np.zeros((0, k), dtype=np.int64)
    return np.concatenate([np.stack([e, f]), rest], axis=0)


def _bilinear(F: FieldSpec, gram: np.ndarray, x: np.ndarray, y: np.ndarray,
              unitary: bool = False) -> int:
    yy = _sigma(F, y, unitary)
    return int(gf_matmul(F, gf_matmul(F, x.reshape(1, -1), gram),
                         yy.reshape(-1, 1))[0, 0])


def unitary_orthonormal_basis(F: FieldSpec, gram: np.ndarray) -> np.ndarray:
    """Rows v_i with f(v_i,v_j) = delta_ij for a nondegenerate Hermitian form."""
    k = gram.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    v = _find_vector(F, k, lambda w: _bilinear(F, gram, w, w, True) != 0,
                     gram.tobytes())
    nv = _bilinear(F, gram, v, v, True)
    alpha = _norm_solve(F, F.inv_table[nv])
    v = F.mul_table[alpha, v]
    comp = gf_left_nullspace(
        F, gf_matmul(F, gram, _sigma(F, v.reshape(1, -1), True).T))
    sub = unitary_orthonormal_basis(F, form_matrix_on(F, gram, comp, True))
    rest = gf_matmul(F, sub, comp) if len(comp) else np.zeros((0, k), dtype=np.int64)
    return np.concatenate([v.reshape(1, -1), rest], axis=0)


def unitary_hyperbolic_basis(F: FieldSpec, gram: np.ndarray) -> np.ndarray:
    """Rows (e1,f1,...,em,fm[,w]) with f(e_i,f_i)=1, f(w,w)=1, rest zero."""
    k = gram.shape[0]
    q = F.p ** F.a
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if k == 1:
        nv = int(gram[0, 0])
        alpha = _norm_solve(F, F.inv_table[nv])
        return np.array([[alpha]], dtype=np.int64)
    e = _find_vector(F, k, lambda w: _bilinear(F, gram, w, w, True) == 0,
                     gram.tobytes())
    pairvals = gf_matmul(F, gram, _sigma(F, gf_identity(k), True).T)
    # partner u with f(e, u) != 0
    row = gf_matmul(F, e.reshape(1, -1), pairvals).ravel()
    idx = int(np.nonzero(row)[0][0])
    u = np.zeros(k, dtype=np.int64)
    u[idx] = 1
    val = _bilinear(F, gram, e, u, True)           # f(e, u)
    # scale so f(e, u) = 1: f(e, c u) = c^q f(e,u) -> c^q = val^{-1}
    c = F.pow_code(F.inv_table[val], q)            # c = (val^{-1})^q, c^q = val^{-q^2} = val^{-1}
    u = F.mul_table[c, u]
    # make u isotropic: f(u + mu e, u + mu e) = f(u,u) + mu + mu^q
    mu = _trace_solve(F, F.neg_table[_bilinear(F, gram, u, u, True)])
    u = F.add_table[u, F.mul_table[mu, e]]
    comp = gf_left_nullspace(
        F, gf_matmul(F, gram, _sigma(F, np.stack([e, u]), True).T))
    sub = unitary_hyperbolic_basis(F, form_matrix_on(F, gram, comp, True))
    rest = gf_matmul(F, sub, comp) if len(comp) else np.zeros((0, k), dtype=np.int64)
    return np.concatenate([np.stack([e, u]), rest], axis=0)


def orthogonal_standard_basis(F: FieldSpec, quad: np.ndarray, q: int) -> tuple[np.ndarray, str]:
    """Basis rows carrying the quadratic form to the standard O^eps form.

    Returns (basis, eps_tag) with eps_tag in {"O+", "O-"}.  Even dimension
    only; the anisotropic residue (minus type) is matched to the standard
    anisotropic 2-block by exhaustive 2x2 change of basis.
    """
    k = quad.shape[0]
    if k % 2 != 0:
        raise ValueError("even dimension required")
    pairs = []
    cur = quad
    lift = gf_identity(k)        # rows of current space in original coords
    while cur.shape[0] > 2:
        v = _find_singular_vector(F, cur)
        if v is None:
            raise ValueError("anisotropic dimension > 2 impossible over finite fields")
        e_c, f_c, comp = _hyperbolic_pair(F, cur, v)
        pairs.append(gf_matmul(F, np.stack([e_c, f_c]), lift))
        lift = gf_matmul(F, comp, lift)
        cur = quad_matrix_on(F, cur, comp)
    if cur.shape[0] == 2:
        v = _find_singular_vector(F, cur)
        if v is not None:
            e_c, f_c, _ = _hyperbolic_pair(F, cur, v)
            pairs.append(gf_matmul(F, np.stack([e_c, f_c]), lift))
            eps = "O+"
        else:
            target = standard_form("O-", 2, q).quad
            T = _match_two_dim_quadratic(F, cur, target)
            pairs.append(gf_matmul(F, T, lift))
            eps = "O-"
    else:
        eps = "O+"
    return np.concatenate(pairs, axis=0), eps


def _hyperbolic_pair(F: FieldSpec, quad: np.ndarray, v: np.ndarray):
    """(e, f, complement_basis): Q(e)=Q(f)=0, B(e,f)=1, complement = {e,f}^perp."""
    k = quad.shape[0]
    B = F.add_table[quad, quad.T]
    pair = gf_matmul(F, B, v.reshape(-1, 1)).ravel()
    idx = int(np.nonzero(pair)[0][0])
    u = np.zeros(k, dtype=np.int64)
    u[idx] = 1
    val = _bilinear(F, B, u, v)
    u = F.mul_table[F.inv_table[val], u]          # B(u, v) = 1
    mu = F.neg_table[quad_values(F, quad, u.reshape(1, -1))[0]]
    u = F.add_table[u, F.mul_table[mu, v]]        # singular partner
    comp = gf_left_nullspace(F, gf_matmul(F, B, np.stack([v, u]).T))
    return v, u, comp


def _match_two_dim_quadratic(F: FieldSpec, quad: np.ndarray,
                             target: np.ndarray) -> np.ndarray:
    """T (2x2) with the form quad in basis T equal to target (exhaustive)."""
    Q = F.order
    for a in range(Q):
        for b in range(Q):
            for c in range(Q):
                for d in range(Q):
                    T = np.array([[a, b], [c, d]], dtype=np.int64)
                    if gf_rank(F, T) < 2:
                        continue
                    if np.array_equal(quad_matrix_on(F, quad, T), target):
                        return T
    raise ValueError("2-dimensional quadratic forms are not isometric")


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _primitive_element(F: FieldSpec) -> int:
    """A multiplicative generator of F* (brute force; fields are tiny)."""
    import sympy
    n = F.order - 1
    primes = list(sympy.factorint(n))
    for c in range(2, F.order):
        if all(F.pow_code(c, n // ell) != 1 for ell in primes):
            return c
    return 1  # GF(2)


def _outer_update(F: FieldSpec, col: np.ndarray, row: np.ndarray,
                  coeff: int) -> np.ndarray:
    """I + coeff * col (outer) row as a code matrix."""
    n = len(col)
    M = F.mul_table[coeff, F.mul_table[col.reshape(-1, 1), row.reshape(1, -1)]]
    return F.add_table[gf_identity(n), M]


def _transvection(F: FieldSpec, gram: np.ndarray, v: np.ndarray, lam: int,
                  unitary: bool) -> np.ndarray:
    """x -> x + lam f(x,v) v  (isotropic center for U; any center for Sp)."""
    c = gf_matmul(F, gram, _sigma(F, v, unitary).reshape(-1, 1)).ravel()
    return _outer_update(F, c, v, lam)


def _reflection(F: FieldSpec, gram: np.ndarray, quad: np.ndarray,
                v: np.ndarray) -> np.ndarray:
    """Orthogonal reflection in the nonsingular vector v (any characteristic)."""
    qv = int(quad_values(F, quad, v.reshape(1, -1))[0])
    c = gf_matmul(F, gram, v.reshape(-1, 1)).ravel()
    coeff = F.neg_table[F.inv_table[qv]]
    return _outer_update(F, c, v, coeff)


def _unitary_reflection(F: FieldSpec, gram: np.ndarray, v: np.ndarray,
                        alpha: int) -> np.ndarray:
    """x -> x + (alpha-1) f(x,v)/f(v,v) v with alpha of norm 1."""
    nv = _bilinear(F, gram, v, v, True)
    c = gf_matmul(F, gram, _sigma(F, v, True).reshape(-1, 1)).ravel()
    coeff = F.mul_table[F.sub_table[alpha, 1], F.inv_table[nv]]
    return _outer_update(F, c, v, coeff)


def _eichler(F: FieldSpec, gram: np.ndarray, quad: np.ndarray,
             u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Siegel/Eichler transformation: u singular, v in u-perp; lies in Omega."""
    n = len(u)
    cu = gf_matmul(F, gram, u.reshape(-1, 1)).ravel()
    cv = gf_matmul(F, gram, v.reshape(-1, 1)).ravel()
    qv = int(quad_values(F, quad, v.reshape(1, -1))[0])
    M = gf_identity(n)
    M = F.add_table[M, F.mul_table[cu.reshape(-1, 1), v.reshape(1, -1)]]
    M = F.sub_table[M, F.mul_table[cv.reshape(-1, 1), u.reshape(1, -1)]]
    M = F.sub_table[M, F.mul_table[qv, F.mul_table[cu.reshape(-1, 1),
                                                   u.reshape(1, -1)]]]
    return M


def _plane_cycle(n: int, npairs: int) -> np.ndarray:
    """Permutation cycling the hyperbolic pairs (2i, 2i+1), fixing the tail."""
    P = np.zeros((n, n), dtype=np.int64)
    for i in range(npairs):
        j = (i + 1) % npairs
        P[2 * i, 2 * j] = 1
        P[2 * i + 1, 2 * j + 1] = 1
    for t in range(2 * npairs, n):
        P[t, t] = 1
    return P


def _pair_swap(n: int) -> np.ndarray:
    """Swap hyperbolic pair 0 with pair 1, fixing everything else."""
    P = gf_identity(n)
    P[[0, 1, 2, 3]] = P[[2, 3, 0, 1]]
    return P


def _linear_generators(F: FieldSpec, n: int, q: int, omega: bool) -> list[np.ndarray]:
    zeta = _primitive_element(F)
    gens = []
    if n == 1:
        return [] if omega else [np.array([[zeta]], dtype=np.int64)]
    for lam in range(1, F.order):
        T = gf_identity(n)
        T[0, 1] = lam
        gens.append(T)
    C = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        C[i, i + 1] = 1
    # determinant of the bare cycle is (-1)^(n-1); fix the wrap entry
    C[n - 1, 0] = F.neg_table[1] if n % 2 == 0 else 1
    gens.append(C)
    if not omega:
        D = gf_identity(n)
        D[0, 0] = zeta
        gens.append(D)
    return gens


def _trace_zero_elements(F: FieldSpec) -> list[int]:
    q = F.p ** F.a
    return [lam for lam in range(1, F.order)
            if F.add_table[lam, F.pow_code(lam, q)] == 0]


def _unitary_generators(F: FieldSpec, n: int, q: int, omega: bool) -> list[np.ndarray]:
    """Generators in the standard (identity-Gram) coordinates.

    Built in a hyperbolic Witt basis and conjugated back.
    """
    gram_id = gf_identity(n)
    W = unitary_hyperbolic_basis(F, gram_id)
    gram_h = form_matrix_on(F, gram_id, W, True)
    m = n // 2
    basis = gf_identity(n)
    zeta = _primitive_element(F)

    gens_h: list[np.ndarray] = []
    if m == 0:
        # 1-dimensional: GU_1(q) is the norm-one circle
        if not omega:
            gens_h.append(np.array([[F.pow_code(zeta, q - 1)]], dtype=np.int64))
    else:
        e1, f1 = basis[0], basis[1]
        centers = [e1, f1]
        if m >= 2:
            centers += [F.add_table[e1, basis[2]], F.add_table[e1, basis[3]],
                        basis[2]]
        for v in centers:
            for lam in _trace_zero_elements(F):
                gens_h.append(_transvection(F, gram_h, v, lam, True))
        if n % 2 == 1:
            # full root-group elements mixing the anisotropic tail vector:
            # e1 fixed, f1 -> f1 + beta.w + lam.e1, w -> w + gamma.e1 with
            # gamma^q = -beta and Tr(lam) = -N(beta) (unipotent, det 1)
            for beta in (1, zeta):
                gamma = F.pow_code(F.neg_table[beta], q)
                lam = _trace_solve(F, F.neg_table[F.pow_code(beta, q + 1)])
                u_el = gf_identity(n)
                u_el[1, 0] = lam
                u_el[1, n - 1] = beta
                u_el[n - 1, 0] = gamma
                gens_h.append(u_el)
        if m >= 2:
            gens_h.append(_plane_cycle(n, m))
        # norm-respecting torus on plane 1
        alpha = zeta
        h = gf_identity(n)
        h[0, 0] = alpha
        h[1, 1] = F.pow_code(F.inv_table[alpha], q)
        if omega:
            if m >= 2:
                h2 = h.copy()
                h2[2, 2] = F.inv_table[alpha]
                h2[3, 3] = F.pow_code(alpha, q)
                gens_h.append(h2)    # det 1
            if n % 2 == 1:
                h3 = h.copy()
                h3[n - 1, n - 1] = F.pow_code(alpha, q - 1)
                gens_h.append(h3)    # det alpha^(1-q) * alpha^(q-1) = 1
        else:
            gens_h.append(h)
            if n % 2 == 1:
                r = gf_identity(n)
                r[n - 1, n - 1] = F.pow_code(zeta, q - 1)  # norm-one scalar on w
                gens_h.append(r)
                # anisotropic-center reflections mixing the tail
                w = basis[n - 1]
                alpha_n1 = F.pow_code(zeta, q - 1)         # norm 1, != 1 if q > 1
                for v in (F.add_table[e1, w],):
                    if alpha_n1 != 1:
                        gens_h.append(_unitary_reflection(F, gram_h, v, alpha_n1))

    Winv = gf_inverse(F, W)
    return [gf_matmul(F, gf_matmul(F, Winv, g), W) for g in gens_h]


def _symplectic_generators(F: FieldSpec, n: int, q: int) -> list[np.ndarray]:
    gram = standard_form("Sp", n, q).gram
    basis = gf_identity(n)
    m = n // 2
    centers = [basis[0], basis[1]]
    if m >= 2:
        centers += [F.add_table[basis[0], basis[2]],
                    F.add_table[basis[0], basis[3]]]
    gens = []
    for v in centers:
        for lam in range(1, F.order):
            gens.append(_transvection(F, gram, v, lam, False))
    if m >= 2:
        gens.append(_plane_cycle(n, m))
    return gens


def _orthogonal_centers(F: FieldSpec, gtype: str, n: int, quad: np.ndarray):
    """Nonsingular reflection centers and singular Eichler (u, v) pairs."""
    basis = gf_identity(n)
    m = n // 2 if gtype == "O+" else (n - 2) // 2 if gtype == "O-" else (n - 1) // 2
    tail = list(range(2 * m, n))
    nonsing = []
    for i in range(min(m, 2)):
        e, f = basis[2 * i], basis[2 * i + 1]
        for lam in range(1, F.order):
            nonsing.append(F.add_table[e, F.mul_table[lam, f]])
    if m >= 2:
        e1, f1, e2, f2 = basis[0], basis[1], basis[2], basis[3]
        nonsing.append(F.add_table[e1, e2])
        for lam in range(1, F.order):
            nonsing.append(F.add_table[F.add_table[e1, e2], F.mul_table[lam, f2]])
            nonsing.append(F.add_table[F.add_table[f1, e2], F.mul_table[lam, f2]])
            for mu in range(1, F.order):
                nonsing.append(F.add_table[F.add_table[e1, F.mul_table[lam, f1]],
                                           F.add_table[e2, F.mul_table[mu, f2]]])
    for t in tail:
        nonsing.append(basis[t])
        if m >= 1:
            nonsing.append(F.add_table[basis[0], basis[t]])
            nonsing.append(F.add_table[basis[1], basis[t]])
            nonsing.append(F.add_table[basis[0], F.add_table[basis[1], basis[t]]])
            for lam in range(1, F.order):
                nonsing.append(F.add_table[basis[0],
                                           F.add_table[basis[1],
                                                       F.mul_table[lam, basis[t]]]])
    if len(tail) == 2:
        nonsing.append(F.add_table[basis[tail[0]], basis[tail[1]]])
        for lam in range(1, F.order):
            nonsing.append(F.add_table[basis[tail[0]],
                                       F.mul_table[lam, basis[tail[1]]]])
    nonsing = [v for v in nonsing
               if quad_values(F, quad, v.reshape(1, -1))[0] != 0]
    epairs = []
    for i in range(m):
        js = {(i + 1) % m, (i + 2) % m, 0, 1} - {i}
        for u in (basis[2 * i], basis[2 * i + 1]):
            for j in sorted(js):
                if j >= m:
                    continue
                epairs.append((u, basis[2 * j]))
                epairs.append((u, basis[2 * j + 1]))
            for t in tail:
                epairs.append((u, basis[t]))
    return nonsing, epairs


def _orthogonal_generators(F: FieldSpec, gtype: str, n: int, q: int,
                           omega: bool) -> list[np.ndarray]:
    fd = standard_form(gtype, n, q)
    quad = fd.quad
    gram = fd.gram
    if n <= 2:
        return _tiny_orthogonal_generators(F, quad, q, omega)
    m = n // 2 if gtype == "O+" else (n - 2) // 2 if gtype == "O-" else (n - 1) // 2
    nonsing, epairs = _orthogonal_centers(F, gtype, n, quad)
    gens = []
    if omega:
        for u, v in epairs:
            gens.append(_eichler(F, gram, quad, u, v))
    else:
        seen = set()
        for v in nonsing:
            key = tuple(int(c) for c in v)
            if key not in seen:
                seen.add(key)
                gens.append(_reflection(F, gram, quad, v))
        if m >= 2:
            gens.append(_pair_swap(n))
        if m >= 3:
            gens.append(_plane_cycle(n, m))
    return gens


def _tiny_orthogonal_generators(F: FieldSpec, quad: np.ndarray, q: int,
                                omega: bool) -> list[np.ndarray]:
    """Exhaustive generators for 1- and 2-dimensional orthogonal groups.

    These groups are too small for the reflection/Eichler machinery (no
    hyperbolic pairs to mix), so enumerate the isometry group directly.
    The rotation subgroup is cyclic; Omega is generated by sigma^gcd(2,q-1)
    for sigma a rotation of maximal order.
    """
    n = quad.shape[0]
    vecs = _all_coord_vectors(F, n)
    iso = []
    for rows in itertools.product(range(len(vecs)), repeat=n):
        g = vecs[np.array(rows)]
        if gf_rank(F, g) < n:
            continue
        if np.array_equal(quad_matrix_on(F, quad, g), quad):
            iso.append(g)
    if not omega:
        return iso
    rotations = [g for g in iso
                 if np.array_equal(g, gf_identity(n))
                 or fixed_space(Mat(F, g)).dim == 0]
    sigma = max(rotations, key=lambda g: perm_order_of_matrix(F, g))
    k = 2 if q % 2 == 1 else 1
    return [(Mat(F, sigma) ** k).a]


def perm_order_of_matrix(F: FieldSpec, g: np.ndarray) -> int:
    """Multiplicative order of an invertible matrix (tiny dimensions only)."""
    M = Mat(F, g)
    acc = M
    ident = Mat(F, gf_identity(g.shape[0]))
    for k in range(1, F.order ** (2 * g.shape[0]) + 2):
        if acc == ident:
            return k
        acc = acc @ M
    raise RuntimeError("order search exceeded bound")


def build_generators(gtype: str, n: int, q: int, omega: bool) -> list[Mat]:
    """Generating matrices for GX_n(q) (omega=False) or Omega_X_n(q)."""
    _check_params(gtype, n, q)
    F = ambient_field(gtype, q)
    if gtype == "L":
        raw = _linear_generators(F, n, q, omega)
    elif gtype == "U":
        raw = _unitary_generators(F, n, q, omega)
    elif gtype == "Sp":
        raw = _symplectic_generators(F, n, q)
    else:
        raw = _orthogonal_generators(F, gtype, n, q, omega)
    return [Mat(F, g) for g in raw]


# ---------------------------------------------------------------------------
# the group descriptor
# ---------------------------------------------------------------------------

class ClassicalGroup:
    """Descriptor for GX_n(q): form, orders, generators, Omega generators."""

    def __init__(self, gtype: str, n: int, q: int):
        _check_params(gtype, n, q)
        self.gtype = gtype
        self.n = n
        self.q = q
        fd = standard_form(gtype, n, q)
        self.field = fd.field
        self.gram = Mat(self.field, fd.gram)
        self.quad = Mat(self.field, fd.quad) if fd.quad is not None else None
        self._gens: list[Mat] | None = None
        self._omega_gens: list[Mat] | None = None

    def __repr__(self):
        return f"ClassicalGroup({self.gtype}, {self.n}, {self.q})"

    @property
    def order(self) -> int:
        return group_order(self.gtype, self.n, self.q)

    @property
    def omega_order(self) -> int:
        return omega_order(self.gtype, self.n, self.q)

    @property
    def generators(self) -> list[Mat]:
        if self._gens is None:
            self._gens = build_generators(self.gtype, self.n, self.q, False)
            for g in self._gens:
                if not preserves_form(g, self):
                    raise RuntimeError(f"generator fails form check in {self}")
        return self._gens

    @property
    def omega_generators(self) -> list[Mat]:
        if self._omega_gens is None:
            self._omega_gens = build_generators(self.gtype, self.n, self.q, True)
            for g in self._omega_gens:
                if not preserves_form(g, self):
                    raise RuntimeError(f"omega generator fails form check in {self}")
        return self._omega_gens


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

_PR_SLOTS = 12
_PR_BURNIN = 200
_PR_STEPS_PER_SAMPLE = 10


class Sampler:
    """Product-replacement random element source ("rattle" variant).

    12 slots initialized from the generators cyclically, 200 burn-in steps;
    each sample performs 10 replacement steps and returns accumulator*slot.
    For gtype L an exact-uniform mode draws random matrices until invertible.
    """

    def __init__(self, group: ClassicalGroup, which: str = "full",
                 seed: int = 0, exact_uniform: bool = False):
        if which not in ("full", "omega"):
            raise ValueError("which must be 'full' or 'omega'")
        self.group = group
        self.which = which
        self.exact_uniform = exact_uniform
        if exact_uniform and group.gtype != "L":
            raise ValueError("exact uniform sampling only for gtype L")
        self.rng = np.random.default_rng(seed)
        self.steps_taken = 0
        if not exact_uniform:
            gens = group.generators if which == "full" else group.omega_generators
            if not gens:
                gens = [Mat(group.field, gf_identity(group.n))]
            F = group.field
            # every generator must seed a slot or the walk is trapped in a
            # proper subgroup; use more slots for large generating sets
            nslots = max(_PR_SLOTS, len(gens))
            self.slots = [gens[i % len(gens)].a.copy() for i in range(nslots)]
            self.acc = gf_identity(group.n)
            for _ in range(max(_PR_BURNIN, 10 * nslots)):
                self._step()

    def _step(self):
        F = self.group.field
        nslots = len(self.slots)
        i = int(self.rng.integers(nslots))
        j = int(self.rng.integers(nslots - 1))
        if j >= i:
            j += 1
        self.slots[i] = gf_matmul(F, self.slots[i], self.slots[j])
        self.acc = gf_matmul(F, self.acc, self.slots[i])
        self.steps_taken += 1

    def sample(self) -> Mat:
        F = self.group.field
        n = self.group.n
        if self.exact_uniform:
            while True:
                A = self.rng.integers(0, F.order, size=(n, n)).astype(np.int64)
                if gf_rank(F, A) == n:
                    return Mat(F, A)
        for _ in range(_PR_STEPS_PER_SAMPLE):
            self._step()
        r = int(self.rng.integers(len(self.slots)))
        return Mat(F, gf_matmul(F, self.acc, self.slots[r]))


def sampler_new(group: ClassicalGroup, which: str = "full", seed: int = 0,
                exact_uniform: bool = False) -> Sampler:
    return Sampler(group, which, seed, exact_uniform)


def sample(s: Sampler) -> Mat:
    return s.sample()


# ---------------------------------------------------------------------------
# generator table serialization
# ---------------------------------------------------------------------------

_TABLE_VERSION = "stingray-gens/1"


def serialize_generators(gtype: str, n: int, q: int, role: str,
                         gens: list[Mat]) -> str:
    """Versioned plain text: header 'X n q role', one matrix per block."""
    lines = [_TABLE_VERSION, f"{gtype} {n} {q} {role}"]
    for g in gens:
        lines.append("")
        for row in g.a:
            lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_generator_table(text: str):
    """Inverse of serialize_generators; returns (gtype, n, q, role, gens)."""
    blocks = text.strip().split("\n\n")
    head = blocks[0].splitlines()
    if head[0].strip() != _TABLE_VERSION:
        raise ValueError(f"unknown table version {head[0]!r}")
    gtype, n_s, q_s, role = head[1].split()
    n, q = int(n_s), int(q_s)
    F = ambient_field(gtype, q)
    gens = []
    for block in blocks[1:]:
        rows = [[int(x) for x in line.split()] for line in block.splitlines()]
        gens.append(Mat(F, np.array(rows, dtype=np.int64)))
    return gtype, n, q, role, gens
