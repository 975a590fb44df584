"""Exact finite-field, polynomial, and integer arithmetic.

Fields GF(p^(a*u)) are represented in a polynomial basis over GF(p).  An
element is stored as an integer *code* in [0, p^(a*u)): the base-p digits of
the code are the polynomial-basis coordinates (little-endian, so code
``c0 + c1*p + c2*p^2 + ...`` stands for ``c0 + c1*x + c2*x^2 + ...``).

The parameter ``u`` distinguishes the group parameter q = p^a from the field
the matrices actually live over: unitary groups of parameter q act on vectors
over GF(q^2), i.e. u = 2; everything else has u = 1.

Fields at desk scale are small (|F| <= a few hundred), so full add/mul lookup
tables are precomputed once per field and shared.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import sympy

# sympy.isprime is deterministic (fixed Miller-Rabin bases) below this bound;
# larger inputs are outside desk scale and rejected.
_PRIMALITY_BOUND = 3_317_044_064_679_887_385_961_981

_TABLE_LIMIT = 4096  # largest field order for which lookup tables are built


# ---------------------------------------------------------------------------
# integer factorization / primality
# ---------------------------------------------------------------------------

class Factorization:
    """A complete prime factorization {prime: exponent} of a positive integer."""

    def __init__(self, prime_powers: dict[int, int]):
        for r, k in prime_powers.items():
            if k <= 0:
                raise ValueError("exponents must be positive")
            if not sympy.isprime(r):
                raise ValueError(f"{r} is not prime")
        self.prime_powers = dict(sorted(prime_powers.items()))

    @property
    def n(self) -> int:
        out = 1
        for r, k in self.prime_powers.items():
            out *= r ** k
        return out

    def __eq__(self, other):
        return isinstance(other, Factorization) and self.prime_powers == other.prime_powers

    def __repr__(self):
        return f"Factorization({self.prime_powers})"


@functools.lru_cache(maxsize=None)
def factor_integer(n: int) -> Factorization:
    """Completely factor n >= 1 (trial division + Pollard rho via sympy)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n >= _PRIMALITY_BOUND ** 2:
        raise ValueError("n beyond desk-scale factorization bound")
    return Factorization(dict(sympy.factorint(n)))


def ppd_set(Q: int, e: int) -> frozenset[int]:
    """Primes r | Q^e - 1 whose multiplicative order mod Q is exactly e.

    Such an r never divides Q^i - 1 for 0 < i < e, and r = k*e + 1.
    The empty set is a legitimate answer (e.g. Q=2, e=6, or e=2 with
    Q+1 a power of two).
    """
    if Q < 2 or e < 1:
        raise ValueError("need Q >= 2, e >= 1")
    out = set()
    for r in factor_integer(Q ** e - 1).prime_powers:
        if sympy.n_order(Q, r) == e:
            out.add(r)
    return frozenset(out)


def element_order(x, exponent_bound: Factorization) -> int:
    """Exact multiplicative order of x, given a factored multiple of it.

    x may be anything supporting ``generic_pow`` semantics (field elements,
    matrices, permutations): it needs __pow__/is_identity via the helpers
    below.  Standard factored-exponent descent.
    """
    N = exponent_bound.n
    if not _pow_is_identity(x, N):
        raise ValueError("x^N is not the identity; exponent_bound invalid")
    order = N
    for r, k in exponent_bound.prime_powers.items():
        while order % r == 0 and _pow_is_identity(x, order // r):
            order //= r
    return order


def _pow_is_identity(x, n: int) -> bool:
    y = x ** n
    if hasattr(y, "is_identity"):
        ident = y.is_identity
        return ident() if callable(ident) else bool(ident)
    return y == 1 or getattr(y, "code", None) == 1


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(p) (plain int-coefficient helpers)
# ---------------------------------------------------------------------------

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_modp(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _poly_trim(out)


def _poly_divmod_modp(f: list[int], g: list[int], p: int):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    quot = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        c = (f[-1] * inv_lead) % p
        quot[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        _poly_trim(f)
    return quot, f


def _poly_gcd_modp(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _poly_divmod_modp(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [(c * inv) % p for c in f]
    return f


def _poly_powmod_modp(base, n, mod, p):
    result = [1]
    base = _poly_divmod_modp(list(base), mod, p)[1]
    while n:
        if n & 1:
            result = _poly_divmod_modp(_poly_mul_modp(result, base, p), mod, p)[1]
        base = _poly_divmod_modp(_poly_mul_modp(base, base, p), mod, p)[1]
        n >>= 1
    return result


def _poly_sub_modp(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p
           for i in range(n)]
    return _poly_trim(out)


def _irreducible_modp(f: list[int], p: int) -> bool:
    """Rabin irreducibility test for a polynomial over the prime field."""
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    xq = _poly_powmod_modp(x, p ** n, f, p)
    diff = _poly_sub_modp(xq, x, p)
    if diff and _poly_divmod_modp(diff, f, p)[1]:
        return False  # x^{p^n} != x mod f
    for ell in factor_integer(n).prime_powers:
        diff = _poly_sub_modp(_poly_powmod_modp(x, p ** (n // ell), f, p), x, p)
        if not diff:
            return False  # f divides x^{p^{n/l}} - x, so f splits below degree n
        if len(_poly_gcd_modp(f, diff, p)) != 1:
            return False
    return True


def _least_irreducible_modp(p: int, k: int) -> list[int]:
    """Lexicographically least monic irreducible of degree k over GF(p).

    Lex order reads the coefficient vector from the highest degree downward,
    i.e. candidates are scanned in increasing order of sum(c_i p^i) with the
    leading coefficient fixed to 1.
    """
    if k == 1:
        return [0, 1]  # the polynomial x
    for low in range(p ** k):
        coeffs = [(low // p ** i) % p for i in range(k)] + [1]
        if _irreducible_modp(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class FieldSpec:
    """GF(p^(a*u)) in a polynomial basis with full lookup tables.

    Attributes
    ----------
    p, a, u : defining parameters; q = p^a is the *group* parameter and
        order = p^(a*u) = q^u is the number of field elements.
    defining_poly : little-endian int coefficients of the monic irreducible
        (lexicographically least) of degree a*u over GF(p).
    """

    def __init__(self, p: int, a: int, u: int):
        if not sympy.isprime(p):
            raise ValueError(f"p={p} is not prime")
        if a < 1 or u not in (1, 2):
            raise ValueError("need a >= 1 and u in {1,2}")
        self.p, self.a, self.u = p, a, u
        self.k = a * u                      # extension degree over GF(p)
        self.q = p ** a                     # group parameter
        self.order = p ** self.k            # |F|
        if self.order > _TABLE_LIMIT:
            raise ValueError(f"field order {self.order} beyond desk scale")
        self.defining_poly = _least_irreducible_modp(p, self.k)
        self._build_tables()

    # -- table construction --------------------------------------------------
    def _build_tables(self):
        p, k, Q = self.p, self.k, self.order
        # code -> coefficient row
        pow_p = p ** np.arange(k, dtype=np.int64)
        codes = np.arange(Q, dtype=np.int64)
        self.coeff_of = ((codes[:, None] // pow_p[None, :]) % p).astype(np.int64)
        self._pow_p = pow_p

        # reduction rows: x^t in the basis, for t in [0, 2k-2]
        red = np.zeros((2 * k - 1, k), dtype=np.int64)
        cur = [1]
        for t in range(2 * k - 1):
            red[t, : len(cur)] = cur
            cur = [0] + cur
            cur = _poly_divmod_modp(cur, self.defining_poly, p)[1]
        self.reduction = red

        add = (self.coeff_of[:, None, :] + self.coeff_of[None, :, :]) % p
        self.add_table = (add @ pow_p).astype(np.int64)
        sub = (self.coeff_of[:, None, :] - self.coeff_of[None, :, :]) % p
        self.sub_table = (sub @ pow_p).astype(np.int64)
        self.neg_table = self.sub_table[0]

        mul = np.zeros((Q, Q), dtype=np.int64)
        for i in range(Q):
            fi = list(self.coeff_of[i])
            for j in range(i, Q):
                prod = _poly_mul_modp(fi, list(self.coeff_of[j]), p)
                prod = _poly_divmod_modp(prod, self.defining_poly, p)[1]
                code = sum(c * p ** t for t, c in enumerate(prod))
                mul[i, j] = mul[j, i] = code
        self.mul_table = mul

        inv = np.zeros(Q, dtype=np.int64)
        for i in range(1, Q):
            j = int(np.nonzero(mul[i] == 1)[0][0])
            inv[i] = j
        self.inv_table = inv

        # Frobenius x -> x^p, and the conjugation x -> x^q used when u = 2
        frob = np.array([self.pow_code(i, p) for i in range(Q)], dtype=np.int64)
        self.frob_table = frob
        conj = np.arange(Q, dtype=np.int64)
        for _ in range(self.a * (self.u - 1) or 0):
            conj = frob[conj]
        if self.u == 2:
            c = np.arange(Q, dtype=np.int64)
            for _ in range(self.a):
                c = frob[c]
            self.conj_table = c
        else:
            self.conj_table = np.arange(Q, dtype=np.int64)

    # -- scalar ops -----------------------------------------------------------
    def pow_code(self, code: int, n: int) -> int:
        if code == 0:
            return 0 if n > 0 else 1
        n %= self.order - 1
        out, base = 1, code
        while n:
            if n & 1:
                out = int(self.mul_table[out, base])
            base = int(self.mul_table[base, base])
            n >>= 1
        return out

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code) % self.order)

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.a, self.u) == (other.p, other.a, other.u))

    def __hash__(self):
        return hash((self.p, self.a, self.u))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def field_create(p: int, a: int, u: int = 1) -> FieldSpec:
    """Create (and cache) the field GF(p^(a*u)) with deterministic basis."""
    return FieldSpec(p, a, u)


@dataclass(frozen=True)
class FieldElement:
    """A single field element: (field, integer code)."""
    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.coeff_of[self.code])

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add_table[self.code, other.code]))

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub_table[self.code, other.code]))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul_table[self.code, other.code]))

    def __pow__(self, n: int):
        if self.code == 0:
            if n == 0:
                return FieldElement(self.field, 1)
            return self
        if n < 0:
            inv = int(self.field.inv_table[self.code])
            return FieldElement(self.field, self.field.pow_code(inv, -n))
        return FieldElement(self.field, self.field.pow_code(self.code, n))

    def inverse(self):
        if self.code == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, int(self.field.inv_table[self.code]))

    def is_identity(self) -> bool:
        return self.code == 1

    def __repr__(self):
        return f"{self.field}#{self.code}"


# ---------------------------------------------------------------------------
# polynomials over a FieldSpec
# ---------------------------------------------------------------------------

class PolyGF:
    """Polynomial over a FieldSpec; coeffs is a little-endian code array."""

    def __init__(self, field: FieldSpec, coeffs):
        self.field = field
        c = np.asarray(coeffs, dtype=np.int64).ravel()
        n = len(c)
        while n > 0 and c[n - 1] == 0:
            n -= 1
        self.coeffs = c[:n].copy()

    # -- basics ---------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def is_monic(self) -> bool:
        return len(self.coeffs) > 0 and self.coeffs[-1] == 1

    def monic(self) -> "PolyGF":
        if self.is_zero() or self.is_monic():
            return self
        inv = int(self.field.inv_table[self.coeffs[-1]])
        return PolyGF(self.field, self.field.mul_table[inv, self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, PolyGF) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.coeffs.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{int(c)}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + f" over {self.field})"

    # -- ring ops -------------------------------------------------------------
    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return PolyGF(F, F.add_table[a, b])

    def __sub__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return PolyGF(F, F.sub_table[a, b])

    def __mul__(self, other):
        F = self.field
        if self.is_zero() or other.is_zero():
            return PolyGF(F, [])
        # convolution through coefficient expansion over GF(p)
        A = F.coeff_of[self.coeffs]          # (n, k)
        B = F.coeff_of[other.coeffs]         # (m, k)
        k, p = F.k, F.p
        n_out = len(self.coeffs) + len(other.coeffs) - 1
        acc = np.zeros((n_out, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                acc[:, i + j] += np.convolve(A[:, i], B[:, j])
        acc %= p
        out = (acc @ F.reduction) % p
        return PolyGF(F, (out @ F._pow_p))

    def divmod(self, other: "PolyGF"):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = self.coeffs.copy()
        d = other.degree
        inv_lead = int(F.inv_table[other.coeffs[-1]])
        q = np.zeros(max(0, len(r) - d), dtype=np.int64)
        deg = len(r) - 1
        while deg >= d:
            if r[deg]:
                c = int(F.mul_table[r[deg], inv_lead])
                q[deg - d] = c
                seg = F.mul_table[c, other.coeffs]
                r[deg - d: deg + 1] = F.sub_table[r[deg - d: deg + 1], seg]
            deg -= 1
        return PolyGF(F, q), PolyGF(F, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other: "PolyGF") -> "PolyGF":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, n: int, mod: "PolyGF") -> "PolyGF":
        result = PolyGF(self.field, [1])
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def derivative(self) -> "PolyGF":
        F = self.field
        if self.degree < 1:
            return PolyGF(F, [])
        out = np.zeros(self.degree, dtype=np.int64)
        for i in range(1, self.degree + 1):
            scalar = i % F.p  # scalar multiples land in the prime subfield
            out[i - 1] = F.mul_table[scalar, self.coeffs[i]]
        return PolyGF(F, out)

    def __call__(self, code: int) -> int:
        """Evaluate at a field element code (Horner)."""
        F = self.field
        acc = 0
        for c in self.coeffs[::-1]:
            acc = int(F.add_table[int(F.mul_table[acc, code]), c])
        return acc

    @staticmethod
    def x(field: FieldSpec) -> "PolyGF":
        return PolyGF(field, [0, 1])

    @staticmethod
    def from_roots_of_unity(field):  # pragma: no cover - convenience stub
        raise NotImplementedError


def is_irreducible(f: PolyGF, F: FieldSpec | None = None) -> bool:
    """Irreducibility over the coefficient field (Rabin's test).

    Checks x^{|F|^n} = x mod f and gcd(x^{|F|^{n/l}} - x, f) = 1 for every
    prime l | n = deg f.
    """
    F = F or f.field
    n = f.degree
    if n < 1:
        raise ValueError("zero or constant polynomial")
    if not f.is_monic():
        f = f.monic()
    Q = F.order
    x = PolyGF.x(F)
    xq = x.powmod(Q ** n, f)
    if not ((xq - x) % f).is_zero():
        return False
    for ell in factor_integer(n).prime_powers:
        h = x.powmod(Q ** (n // ell), f) - x
        if h.is_zero() or f.gcd(h).degree > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# polynomial factorization (squarefree + distinct-degree + Cantor-Zassenhaus)
# ---------------------------------------------------------------------------

def factor_poly(f: PolyGF) -> list[tuple[PolyGF, int]]:
    """Factor a nonzero polynomial into monic irreducibles with multiplicity.

    Deterministic: the equal-degree splitting RNG is seeded from the
    polynomial's coefficients, so repeated calls give identical output order.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    f = f.monic()
    out: dict[PolyGF, int] = {}
    for g, mult in _squarefree_decomposition(f):
        for h in _factor_squarefree(g):
            out[h] = out.get(h, 0) + mult
    items = sorted(out.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs.tobytes()))
    return items


def _squarefree_decomposition(f: PolyGF) -> list[tuple[PolyGF, int]]:
    F = f.field
    p = F.p
    out = []
    if f.degree == 0:
        return out
    d = f.derivative()
    if d.is_zero():
        # f is a p-th power: pull the p-th root and recurse
        root = _pth_root(f)
        return [(g, m * p) for g, m in _squarefree_decomposition(root)]
    c = f.gcd(d)
    w = f.divmod(c)[0]
    mult = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w.divmod(y)[0]
        if z.degree > 0:
            out.append((z.monic(), mult))
        mult += 1
        w = y
        c = c.divmod(y)[0]
    if c.degree > 0:
        out.extend((g, m * p) for g, m in _squarefree_decomposition(_pth_root(c)))
    return out


def _pth_root(f: PolyGF) -> PolyGF:
    F = f.field
    p = F.p
    assert f.degree % p == 0
    # p-th root of each coefficient: c -> c^{|F|/p}
    n = f.degree // p
    out = np.zeros(n + 1, dtype=np.int64)
    for i in range(n + 1):
        out[i] = F.pow_code(int(f.coeffs[i * p]), F.order // p)
    return PolyGF(F, out)


def _factor_squarefree(f: PolyGF) -> list[PolyGF]:
    """Distinct-degree then equal-degree factorization of squarefree monic f."""
    F = f.field
    Q = F.order
    out = []
    x = PolyGF.x(F)
    h = x
    rem = f
    d = 0
    while rem.degree > 0:
        d += 1
        if 2 * d > rem.degree:
            out.append(rem)
            break
        h = h.powmod(Q, rem)
        g = rem.gcd(h - x)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d))
            rem = rem.divmod(g)[0]
            h = h % rem
    return out


def _equal_degree_split(f: PolyGF, d: int) -> list[PolyGF]:
    """Cantor-Zassenhaus splitting of f into irreducibles of degree d."""
    F = f.field
    if f.degree == d:
        return [f.monic()]
    rng = np.random.default_rng(int.from_bytes(f.coeffs.tobytes()[:8].ljust(8, b"\1"), "little"))
    Q = F.order
    n = f.degree
    while True:
        coeffs = rng.integers(0, Q, size=n)
        a = PolyGF(F, coeffs)
        if a.degree < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree < f.degree:
            break
        if Q % 2 == 1:
            b = a.powmod((Q ** d - 1) // 2, f) - PolyGF(F, [1])
        else:
            # trace map for characteristic 2
            b = a
            acc = a
            for _ in range(d * F.k - 1):
                acc = acc.powmod(2, f)
                b = b + acc
        g = f.gcd(b)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree_split(g, d) + _equal_degree_split(f.divmod(g)[0], d)
