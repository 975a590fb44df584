"""Alternating-group analogue of the stingray pipeline.

Powers a permutation into a single prime-length cycle, conjugates two such
cycles until their supports share exactly one point, and certifies that the
pair generates a naturally embedded alternating group of degree
|support union|.  Overlap probabilities are available exactly (counting
module) and by Monte Carlo over uniform alternating-group elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy

from .counting import alt_overlap_proportion
from .recognize import perm_order
from .stats import MCEstimate


class Perm:
    """Permutation of {0,...,n-1} stored as an image array."""

    def __init__(self, images):
        self.images = np.asarray(images, dtype=np.int64)
        n = len(self.images)
        if sorted(self.images.tolist()) != list(range(n)):
            raise ValueError("not a bijection")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Perm":
        img = np.arange(n, dtype=np.int64)
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    def __mul__(self, other: "Perm") -> "Perm":
        # (self * other)(x) = other(self(x)): apply self first.
        return Perm(other.images[self.images])

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.n, dtype=np.int64)
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = np.arange(self.n, dtype=np.int64)
        base = self.images
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return Perm(result)

    def conjugate(self, x: "Perm") -> "Perm":
        """x^{-1} * self * x."""
        return x.inverse() * self * x

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and np.array_equal(self.images,
                                                          other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def cycles(self) -> list[list[int]]:
        """Nontrivial cycles, each starting from its least point."""
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = int(self.images[start])
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = int(self.images[x])
            out.append(cyc)
        return out

    def cycle_type(self) -> list[int]:
        return sorted(len(c) for c in self.cycles())

    def order(self) -> int:
        return math.lcm(*(self.cycle_type() or [1]))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.images
                                                != np.arange(self.n))[0])

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return f"Perm(id, n={self.n})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        return f"Perm({body}, n={self.n})"


@dataclass(frozen=True)
class CycleCert:
    """A single p-cycle (p an odd prime) with everything else fixed."""
    perm: Perm
    p: int
    support: tuple[int, ...]

    def __post_init__(self):
        if self.p % 2 == 0 or not sympy.isprime(self.p):
            raise ValueError("cycle length must be an odd prime")
        cyc = self.perm.cycles()
        if len(cyc) != 1 or len(cyc[0]) != self.p:
            raise ValueError("permutation is not a single p-cycle")
        if set(self.support) != set(cyc[0]):
            raise ValueError("support mismatch")

    def conjugate(self, x: Perm) -> "CycleCert":
        moved = self.perm.conjugate(x)
        return CycleCert(moved, self.p, moved.support())


def pcycle_scan(g: Perm, lo: int, hi: int) -> CycleCert | None:
    """Power g down to a p-cycle for an odd prime p in [lo, hi].

    Requires exactly one cycle of length p and no other cycle length
    divisible by p, so that raising to the lcm of the other lengths kills
    everything else and leaves the p-cycle intact.
    """
    if not (hi >= lo >= 3):
        raise ValueError("need hi >= lo >= 3")
    lengths = g.cycle_type()
    for p in sorted(set(lengths)):
        if p < lo or p > hi or not sympy.isprime(p) or p == 2:
            continue
        if lengths.count(p) != 1:
            continue
        others = [m for m in lengths if m != p]
        if any(m % p == 0 for m in others):
            continue
        m = math.lcm(*(others or [1]))
        h = g ** m
        return CycleCert(h, p, h.support())
    return None


@dataclass(frozen=True)
class AltVerdict:
    kind: str            # A_k | CpxCr | Other
    k: int               # |support union|
    order: int


def natural_embed_check(g: CycleCert, h: CycleCert) -> AltVerdict:
    """Classify the group generated by two prime cycles on the same points.

    With k the size of the union of supports, overlap forces a naturally
    embedded A_k whenever max{p+3, r} <= k <= min{p+r-1, n} (p <= r); the
    order is confirmed by Schreier-Sims.  Disjoint supports give the
    commuting direct product.
    """
    if g.perm.n != h.perm.n:
        raise ValueError("degrees differ")
    n = g.perm.n
    sup_g, sup_h = set(g.support), set(h.support)
    union = sup_g | sup_h
    k = len(union)
    order = perm_order([g.perm.images, h.perm.images], n)
    if not (sup_g & sup_h):
        return AltVerdict("CpxCr", k, order)
    p, r = sorted((g.p, h.p))
    if max(p + 3, r) <= k <= min(p + r - 1, n):
        expected = math.factorial(k) // 2
        if order != expected:
            raise AssertionError(
                f"embedded alternating group expected order {expected}, "
                f"got {order}")
        return AltVerdict("A_k", k, order)
    return AltVerdict("Other", k, order)


def random_even_perm(n: int, rng: np.random.Generator) -> Perm:
    """Uniform element of A_n: Fisher-Yates shuffle, then fix parity by a
    transposition of the first two points."""
    img = rng.permutation(n).astype(np.int64)
    g = Perm(img)
    if not g.is_even():
        img[0], img[1] = img[1], img[0]
        g = Perm(img)
    return g


def step3_search(g: CycleCert, h: CycleCert, budget: int,
                 seed: int = 0) -> tuple[CycleCert, AltVerdict] | None:
    """Conjugate g by random even permutations until the supports of g^x
    and h share exactly one point; then classify the pair."""
    sup_g, sup_h = set(g.support), set(h.support)
    if sup_g & sup_h:
        raise ValueError("supports must be disjoint")
    n = g.perm.n
    p, r = sorted((g.p, h.p))
    if p + r >= n:
        raise ValueError("need p + r < n")
    if p == 3 and r == 3 and n <= 20:
        raise ValueError("p = r = 3 requires n > 20")
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        x = random_even_perm(n, rng)
        moved = {int(x.images[i]) for i in sup_g}
        if len(moved & sup_h) == 1:
            gx = g.conjugate(x)
            return gx, natural_embed_check(gx, h)
    return None


def mc_overlap(n: int, p: int, r: int, trials: int,
               seed: int = 0) -> MCEstimate:
    """Monte Carlo estimate of the single-point support-overlap proportion
    over uniform A_n, for disjoint reference supports of sizes p and r."""
    alt_overlap_proportion(n, p, r)  # validates the parameters
    delta = set(range(p))
    delta2 = set(range(p, p + r))
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(trials):
        x = random_even_perm(n, rng)
        moved = {int(x.images[i]) for i in delta}
        if len(moved & delta2) == 1:
            hits += 1
    return MCEstimate(hits, trials, seed,
                      metadata={"n": n, "p": p, "r": r,
                                "kind": "alt_overlap"})
