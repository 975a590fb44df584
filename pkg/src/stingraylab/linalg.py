"""Exact dense linear algebra over GF(q^u).

Matrices hold integer element codes (see gf.FieldSpec) in numpy arrays.
Vectors are rows and groups act on the right: the image of v under g is v @ g.

Prime fields use plain integer matmul mod p; extension fields expand each
code into its GF(p)-coordinate vector, multiply componentwise, and reduce
through the field's basis-reduction table.  Both paths are exact.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec, PolyGF


# ---------------------------------------------------------------------------
# raw array helpers (operate on code arrays; used by Mat and by hot loops)
# ---------------------------------------------------------------------------

def gf_matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact matrix product of two code arrays over F."""
    if F.k == 1:
        return (A.astype(np.int64) @ B.astype(np.int64)) % F.p
    k, p = F.k, F.p
    Ac = F.coeff_of[A]                    # (n, m, k)
    Bc = F.coeff_of[B]                    # (m, r, k)
    n, m = A.shape
    r = B.shape[1]
    acc = np.zeros((n, r, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            acc[:, :, i + j] += Ac[:, :, i] @ Bc[:, :, j]
    acc %= p
    out = (acc.reshape(n * r, 2 * k - 1) @ F.reduction) % p
    return (out @ F._pow_p).reshape(n, r)


def gf_rref(F: FieldSpec, A: np.ndarray):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    R = A.copy()
    n, m = R.shape
    mul, sub, inv = F.mul_table, F.sub_table, F.inv_table
    pivots = []
    row = 0
    for col in range(m):
        if row >= n:
            break
        nz = np.nonzero(R[row:, col])[0]
        if len(nz) == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        pv = int(R[row, col])
        if pv != 1:
            R[row] = mul[int(inv[pv]), R[row]]
        # eliminate all other rows at once
        factors = R[:, col].copy()
        factors[row] = 0
        mask = factors != 0
        if mask.any():
            R[mask] = sub[R[mask], mul[factors[mask, None], R[row][None, :]]]
        pivots.append(col)
        row += 1
    return R, pivots


def gf_rank(F: FieldSpec, A: np.ndarray) -> int:
    return len(gf_rref(F, A)[1])


def gf_left_nullspace(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Rows x with x @ A = 0, as an RREF basis (possibly 0 rows)."""
    return gf_right_nullspace(F, A.T)


def gf_right_nullspace(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Solutions y (as rows) of A @ y^T = 0, i.e. the kernel of the row map."""
    n, m = A.shape
    R, pivots = gf_rref(F, A)
    free = [j for j in range(m) if j not in pivots]
    basis = np.zeros((len(free), m), dtype=np.int64)
    neg = F.neg_table
    for idx, j in enumerate(free):
        basis[idx, j] = 1
        for i, pc in enumerate(pivots):
            basis[idx, pc] = neg[R[i, j]]
    if len(free):
        basis, _ = gf_rref(F, basis)
    return basis


def gf_inverse(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = gf_rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def gf_identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Mat:
    """A matrix of field-element codes over a FieldSpec."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, array):
        self.field = field
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if a.size and (a.min() < 0 or a.max() >= field.order):
            raise ValueError("entry code out of field range")
        self.a = a

    # -- constructors ----------------------------------------------------
    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        return Mat(field, gf_identity(n))

    @staticmethod
    def zeros(field: FieldSpec, n: int, m: int) -> "Mat":
        return Mat(field, np.zeros((n, m), dtype=np.int64))

    @staticmethod
    def companion(f: PolyGF) -> "Mat":
        """Companion matrix of a monic polynomial (acting on row vectors)."""
        F = f.field
        n = f.degree
        if not f.is_monic():
            f = f.monic()
        a = np.zeros((n, n), dtype=np.int64)
        for i in range(n - 1):
            a[i, i + 1] = 1
        a[n - 1, :] = F.neg_table[f.coeffs[:n]]
        return Mat(F, a)

    @staticmethod
    def block_diag(blocks: list["Mat"]) -> "Mat":
        F = blocks[0].field
        n = sum(b.nrows for b in blocks)
        out = np.zeros((n, n), dtype=np.int64)
        at = 0
        for b in blocks:
            out[at: at + b.nrows, at: at + b.nrows] = b.a
            at += b.nrows
        return Mat(F, out)

    # -- basics ------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return self.a.shape[0]

    @property
    def ncols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def is_identity(self) -> bool:
        return (self.nrows == self.ncols
                and np.array_equal(self.a, gf_identity(self.nrows)))

    def __repr__(self):
        return f"Mat({self.field}, {self.a.tolist()})"

    def copy(self) -> "Mat":
        return Mat(self.field, self.a.copy())

    # -- arithmetic ----------------------------------------------------------
    def __matmul__(self, other: "Mat") -> "Mat":
        return Mat(self.field, gf_matmul(self.field, self.a, other.a))

    __mul__ = __matmul__

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(self.field, self.field.add_table[self.a, other.a])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.field, self.field.sub_table[self.a, other.a])

    def __pow__(self, n: int) -> "Mat":
        return mat_pow(self, n)

    def inverse(self) -> "Mat":
        return Mat(self.field, gf_inverse(self.field, self.a))

    def transpose(self) -> "Mat":
        return Mat(self.field, self.a.T.copy())

    def conjugate(self) -> "Mat":
        """Entrywise x -> x^q (the identity unless the field has u = 2)."""
        return Mat(self.field, self.field.conj_table[self.a])

    def conjugate_transpose(self) -> "Mat":
        return Mat(self.field, self.field.conj_table[self.a.T])

    def rank(self) -> int:
        return gf_rank(self.field, self.a)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def mat_pow(g: Mat, n: int) -> Mat:
    """g^n by binary exponentiation; n may be a huge integer; n >= 0."""
    if n < 0:
        return mat_pow(g.inverse(), -n)
    F = g.field
    result = gf_identity(g.nrows)
    base = g.a
    while n:
        if n & 1:
            result = gf_matmul(F, result, base)
        if n > 1:
            base = gf_matmul(F, base, base)
        n >>= 1
    return Mat(F, result)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of row vectors, canonically represented by its RREF basis.

    Two Subspace objects are equal iff their canonical bases are identical
    arrays, so equality and hashing are byte-level.
    """

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: FieldSpec, ambient_dim: int, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient_dim)
        R, pivots = gf_rref(field, rows)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = R[: len(pivots)].copy()

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.field == other.field
                and self.ambient_dim == other.ambient_dim
                and self.basis.shape == other.basis.shape
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim} over {self.field})"

    def contains_vector(self, v: np.ndarray) -> bool:
        stacked = np.concatenate([self.basis, v.reshape(1, -1)], axis=0)
        return gf_rank(self.field, stacked) == self.dim

    def contains(self, other: "Subspace") -> bool:
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return gf_rank(self.field, stacked) == self.dim

    def intersection(self, other: "Subspace") -> "Subspace":
        # rows x,y with x A = y B  <->  kernel of [A; -B] stacked
        A, B = self.basis, other.basis
        stacked = np.concatenate([A, self.field.neg_table[B]], axis=0)
        ker = gf_left_nullspace(self.field, stacked)
        if ker.shape[0] == 0:
            return Subspace(self.field, self.ambient_dim, np.zeros((0, self.ambient_dim), dtype=np.int64))
        combo = gf_matmul(self.field, ker[:, : A.shape[0]], A)
        return Subspace(self.field, self.ambient_dim, combo)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient_dim,
                        np.concatenate([self.basis, other.basis], axis=0))


def full_space(field: FieldSpec, d: int) -> Subspace:
    return Subspace(field, d, gf_identity(d))


def zero_space(field: FieldSpec, d: int) -> Subspace:
    return Subspace(field, d, np.zeros((0, d), dtype=np.int64))


# ---------------------------------------------------------------------------
# the spec operations
# ---------------------------------------------------------------------------

def fixed_space(g: Mat) -> Subspace:
    """Kernel of g - I: vectors fixed pointwise (rows v with v g = v)."""
    F = g.field
    diff = F.sub_table[g.a, gf_identity(g.nrows)]
    return Subspace(F, g.nrows, gf_left_nullspace(F, diff))


def moved_space(g: Mat) -> Subspace:
    """Row space of g - I (the subspace U_g for a stingray element)."""
    F = g.field
    diff = F.sub_table[g.a, gf_identity(g.nrows)]
    return Subspace(F, g.nrows, diff)


def is_direct_sum(U: Subspace, W: Subspace) -> bool:
    """True iff U + W is a direct-sum decomposition of the full ambient space."""
    if U.ambient_dim != W.ambient_dim or U.field != W.field:
        raise ValueError("ambient mismatch")
    d = U.ambient_dim
    if U.dim + W.dim != d:
        return False
    stacked = np.concatenate([U.basis, W.basis], axis=0)
    return gf_rank(U.field, stacked) == d


def is_complement_pair(U: Subspace, W: Subspace) -> bool:
    """U ∩ W = 0 (dims need not fill the ambient space)."""
    stacked = np.concatenate([U.basis, W.basis], axis=0)
    return gf_rank(U.field, stacked) == U.dim + W.dim


def restrict(g: Mat, U: Subspace) -> Mat:
    """Matrix of g on the invariant subspace U, in the basis rows of U."""
    F = g.field
    img = gf_matmul(F, U.basis, g.a)
    # solve X @ U.basis = img  row by row using RREF structure
    X = solve_in_rowspace(F, U.basis, img)
    if X is None:
        raise ValueError("subspace is not invariant under g")
    return Mat(F, X)


def solve_in_rowspace(F: FieldSpec, basis: np.ndarray, rows: np.ndarray):
    """Express each row of ``rows`` as a combination of ``basis`` rows.

    Returns the coefficient matrix X with X @ basis = rows, or None if some
    row lies outside the row space.  ``basis`` must be in RREF.
    """
    R, pivots = gf_rref(F, basis)
    if not np.array_equal(R[: len(pivots)], basis):
        raise ValueError("basis must be in reduced row echelon form")
    X = rows[:, pivots].copy()
    residual = F.sub_table[rows, gf_matmul(F, X, basis)]
    if residual.any():
        return None
    return X


def charpoly(M: Mat) -> PolyGF:
    """Monic characteristic polynomial det(tI - M) via Hessenberg reduction."""
    F = M.field
    n = M.nrows
    if n != M.ncols:
        raise ValueError("charpoly needs a square matrix")
    mul, sub, add, inv, neg = (F.mul_table, F.sub_table, F.add_table,
                               F.inv_table, F.neg_table)
    H = M.a.copy()
    for j in range(n - 2):
        nz = np.nonzero(H[j + 1:, j])[0]
        if len(nz) == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            H[[j + 1, piv]] = H[[piv, j + 1]]
            H[:, [j + 1, piv]] = H[:, [piv, j + 1]]
        pv_inv = int(inv[H[j + 1, j]])
        for i in range(j + 2, n):
            if H[i, j]:
                c = int(mul[H[i, j], pv_inv])
                H[i] = sub[H[i], mul[c, H[j + 1]]]
                H[:, j + 1] = add[H[:, j + 1], mul[c, H[:, i]]]
    # recurrence on leading principal minors of tI - H
    polys = [np.array([1], dtype=np.int64)]  # p_0 = 1
    for m in range(1, n + 1):
        i = m - 1
        # (t - H[i,i]) * p_{m-1}
        prev = polys[m - 1]
        cur = np.zeros(m + 1, dtype=np.int64)
        cur[1:] = prev
        cur[:-1] = sub[cur[:-1], mul[H[i, i], prev]]
        run = 1  # product of subdiagonal entries
        for s in range(1, m):
            run = int(mul[run, H[i - s + 1, i - s]])
            if run == 0:
                break
            coeff = int(mul[H[i - s, i], run])
            if coeff:
                lower = polys[m - 1 - s]
                cur[: len(lower)] = sub[cur[: len(lower)], mul[coeff, lower]]
        polys.append(cur)
    return PolyGF(F, polys[n])
