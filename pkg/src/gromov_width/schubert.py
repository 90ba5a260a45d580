"""Schubert calculus on Gr(k, n): classical Littlewood-Richardson numbers,
the small quantum product by rim-hook reduction, and 3-point genus-0
Gromov-Witten invariants.

Schubert classes are indexed by partitions inside the k x (n-k) box.  The
quantum parameter q has cohomological degree 2n, so every term q^d sigma_nu
of sigma_lam * sigma_mu satisfies |nu| + d*n = |lam| + |mu|.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple


class BoxError(ValueError):
    """A partition does not fit in the k x (n-k) box."""


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (trailing zeros trimmed).

    >>> Partition([2, 1, 0])
    (2, 1)
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts.pop()
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """The i-th part (0-based), zero past the end."""
        return self[i] if i < len(self) else 0

    def contains(self, other: Sequence[int]) -> bool:
        """Young diagram containment other <= self."""
        return len(other) <= len(self) and all(o <= s for o, s in zip(other, self))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


@dataclass(frozen=True)
class BoxContext:
    """Gr(k, n), the Grassmannian of k-planes in C^n."""

    k: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.n, int)):
            raise TypeError("k and n must be integers")
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")

    @property
    def rows(self) -> int:
        return self.k

    @property
    def cols(self) -> int:
        return self.n - self.k

    @property
    def complex_dim(self) -> int:
        return self.k * (self.n - self.k)

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def fits(self, lam: Sequence[int]) -> bool:
        lam = Partition(lam)
        return len(lam) <= self.k and lam.part(0) <= self.cols

    def check(self, lam: Sequence[int]) -> Partition:
        lam = Partition(lam)
        if not self.fits(lam):
            raise BoxError(f"{list(lam)} does not fit in the {self.k}x{self.cols} box of Gr({self.k},{self.n})")
        return lam

    def partitions(self) -> List[Partition]:
        """All partitions in the box, sorted by (size, parts)."""
        out = [Partition(p) for p in _bounded_partitions(self.k, self.cols)]
        return sorted(out, key=lambda p: (p.size, tuple(p)))

    def point_class(self) -> Partition:
        return Partition([self.cols] * self.k)


def _bounded_partitions(rows: int, cols: int) -> Iterator[Tuple[int, ...]]:
    if rows == 0:
        yield ()
        return
    for first in range(cols, -1, -1):
        for rest in _bounded_partitions(rows - 1, first):
            yield (first,) + rest


def partitions_of(total: int, max_rows: int, max_part: int) -> Iterator[Partition]:
    """Partitions of ``total`` with at most ``max_rows`` parts, each <= max_part."""

    def rec(remaining, rows, cap):
        if remaining == 0:
            yield ()
            return
        if rows == 0:
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in rec(remaining - first, rows - 1, first):
                yield (first,) + rest

    for parts in rec(total, max_rows, max_part):
        yield Partition(parts)


def complement(nu: Sequence[int], ctx: BoxContext) -> Partition:
    """Box complement: (nu^v)_i = (n-k) - nu_{k+1-i}."""
    nu = ctx.check(nu)
    return Partition(ctx.cols - nu.part(ctx.k - 1 - i) for i in range(ctx.k))


# --- classical Littlewood-Richardson -----------------------------------------

def lr_coefficient(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """Littlewood-Richardson coefficient c^nu_{lam, mu}.

    Counts semistandard fillings of the skew shape nu/lam with content mu whose
    reverse reading word is a lattice word.  Returns 0 whenever the sizes do
    not add up or lam, mu are not contained in nu.
    """
    return _lr(Partition(lam), Partition(mu), Partition(nu))


@lru_cache(maxsize=None)
def _lr(lam: Partition, mu: Partition, nu: Partition) -> int:
    if lam.size + mu.size != nu.size or not nu.contains(lam) or not nu.contains(mu):
        return 0
    if not mu:
        return 1
    # cells of nu/lam in reading order: rows top to bottom, right to left
    cells = [(r, c) for r in range(len(nu)) for c in range(nu[r] - 1, lam.part(r) - 1, -1)]
    filling: Dict[Tuple[int, int], int] = {}
    used = [0] * (len(mu) + 1)  # used[v], values 1..len(mu)

    def rec(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        lo = 1
        above = filling.get((r - 1, c))
        if above is not None:
            lo = above + 1
        hi = min(len(mu), r + 1)
        right = filling.get((r, c + 1))
        if right is not None:
            hi = min(hi, right)
        total = 0
        for v in range(lo, hi + 1):
            if used[v] >= mu[v - 1]:
                continue
            if v > 1 and used[v] + 1 > used[v - 1]:
                continue
            used[v] += 1
            filling[(r, c)] = v
            total += rec(idx + 1)
            del filling[(r, c)]
            used[v] -= 1
        return total

    return rec(0)


def classical_product(lam: Sequence[int], mu: Sequence[int], max_rows: int | None = None) -> Dict[Partition, int]:
    """Expansion of s_lam * s_mu in Schur functions, optionally truncated to
    partitions with at most ``max_rows`` rows."""
    lam, mu = Partition(lam), Partition(mu)
    total = lam.size + mu.size
    rows = len(lam) + len(mu) if max_rows is None else max_rows
    out = {}
    for gamma in partitions_of(total, rows, lam.part(0) + mu.part(0)):
        c = _lr(lam, mu, gamma)
        if c:
            out[gamma] = c
    return out


# --- quantum product ----------------------------------------------------------

def reduce_rim_hooks(gamma: Sequence[int], ctx: BoxContext) -> Tuple[int, Partition, int] | None:
    """Strip n-rim hooks from gamma (at most k rows) until it fits the box.

    Uses the k-bead abacus: beta_i = gamma_i + k - i.  Removing an n-rim hook
    moves one bead down n positions; the hook occupies 1 + (beads jumped)
    rows and contributes the sign (-1)^(k - rows).  Returns ``(sign, core,
    degree)`` or ``None`` when gamma cannot be reduced into the box.
    """
    k, n = ctx.k, ctx.n
    gamma = Partition(gamma)
    if len(gamma) > k:
        return None
    beads = [gamma.part(i) + k - 1 - i for i in range(k)]
    sign, degree = 1, 0
    while beads[0] > n - 1:
        occupied = set(beads)
        for idx, b in enumerate(beads):
            if b - n >= 0 and (b - n) not in occupied:
                break
        else:
            return None
        target = beads[idx] - n
        jumped = sum(1 for x in beads if target < x < beads[idx])
        rows = jumped + 1
        if (k - rows) % 2:
            sign = -sign
        beads[idx] = target
        beads.sort(reverse=True)
        degree += 1
    core = Partition(beads[i] - (k - 1 - i) for i in range(k))
    return sign, core, degree


@dataclass
class QuantumProduct:
    """Finite linear combination sum coeff * q^degree * sigma_partition in QH*(Gr(k,n))."""

    context: BoxContext
    terms: Dict[Tuple[Partition, int], int] = field(default_factory=dict)

    @classmethod
    def schubert(cls, lam: Sequence[int], ctx: BoxContext) -> "QuantumProduct":
        return cls(ctx, {(ctx.check(lam), 0): 1})

    def coefficient(self, nu: Sequence[int], degree: int) -> int:
        return self.terms.get((Partition(nu), degree), 0)

    def __mul__(self, other: "QuantumProduct") -> "QuantumProduct":
        if self.context != other.context:
            raise ValueError("products live in different Grassmannians")
        out: Dict[Tuple[Partition, int], int] = {}
        for (a, da), ca in self.terms.items():
            for (b, db), cb in other.terms.items():
                for (nu, d), c in quantum_product(a, b, self.context).terms.items():
                    key = (nu, d + da + db)
                    out[key] = out.get(key, 0) + ca * cb * c
        return QuantumProduct(self.context, {key: c for key, c in out.items() if c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantumProduct):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def sorted_terms(self) -> List[Tuple[Partition, int, int]]:
        return sorted(((nu, d, c) for (nu, d), c in self.terms.items()), key=lambda t: (t[1], tuple(t[0])))

    def to_json(self) -> list:
        return [{"partition": list(nu), "degree": d, "coeff": c} for nu, d, c in self.sorted_terms()]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: list, ctx: BoxContext) -> "QuantumProduct":
        terms = {}
        for item in data:
            terms[(ctx.check(item["partition"]), int(item["degree"]))] = int(item["coeff"])
        return cls(ctx, terms)


def quantum_product(lam: Sequence[int], mu: Sequence[int], ctx: BoxContext) -> QuantumProduct:
    """Small quantum product sigma_lam * sigma_mu in QH*(Gr(k, n)).

    Raises :class:`BoxError` for partitions outside the box and
    :class:`ArithmeticError` if reduction ever yields a negative coefficient
    (quantum Littlewood-Richardson numbers of Grassmannians are nonnegative).
    """
    return QuantumProduct(ctx, dict(_quantum_terms(ctx.check(lam), ctx.check(mu), ctx)))


@lru_cache(maxsize=None)
def _quantum_terms(lam: Partition, mu: Partition, ctx: BoxContext) -> Tuple[Tuple[Tuple[Partition, int], int], ...]:
    acc: Dict[Tuple[Partition, int], int] = {}
    for gamma, c in classical_product(lam, mu, max_rows=ctx.k).items():
        reduced = reduce_rim_hooks(gamma, ctx)
        if reduced is None:
            continue
        sign, core, d = reduced
        acc[(core, d)] = acc.get((core, d), 0) + sign * c
    for key, c in acc.items():
        if c < 0:
            raise ArithmeticError(f"negative quantum coefficient {c} for {key} in {lam}*{mu} on Gr({ctx.k},{ctx.n})")
    return tuple(sorted(((key, c) for key, c in acc.items() if c), key=lambda t: (t[0][1], tuple(t[0][0]))))


def degree_condition(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int], d: int, ctx: BoxContext) -> bool:
    """|lam| + |mu| + |nu| = k(n-k) + d*n, the dimension constraint for a
    nonzero 3-point invariant of degree d."""
    return sum(lam) + sum(mu) + sum(nu) == ctx.complex_dim + d * ctx.n


def gw_invariant_3pt(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int], d: int, ctx: BoxContext) -> int:
    """Genus-0 3-point invariant <sigma_lam, sigma_mu, sigma_nu>_d.

    Read off as the coefficient of q^d sigma_{nu^v} in sigma_lam * sigma_mu.
    Zero (not an error) when the degree condition fails.
    """
    lam, mu, nu = ctx.check(lam), ctx.check(mu), ctx.check(nu)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if not degree_condition(lam, mu, nu, d, ctx):
        return 0
    return quantum_product(lam, mu, ctx).coefficient(complement(nu, ctx), d)


def parse_partition(text: str) -> Partition:
    """CLI syntax: comma-separated parts, empty string for the empty partition."""
    text = text.strip()
    if not text:
        return Partition()
    return Partition(int(tok) for tok in text.split(","))
