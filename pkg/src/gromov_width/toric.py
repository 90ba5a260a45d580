"""Delzant polytopes and the ball capacities they certify.

A polytope is given by facets {x : <u, x> >= c} with primitive integer inward
normals u.  At a vertex v with primitive edge vectors eta_1..eta_d, the open
region {v + pi sum |z_j|^2 eta_j} of C^d embeds equivariantly into the toric
manifold as long as it stays inside the polytope minus the facets that miss
v.  The ball B(a) has moment image the simplex {x >= 0, sum x_j < a}, so
B(a) embeds for every a below the largest such simplex at v.

All arithmetic is exact (``fractions.Fraction``).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]


class PolytopeError(ValueError):
    """Input that is not a bounded full-dimensional polytope, or malformed input."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or [message]


@dataclass(frozen=True)
class Facet:
    normal: Tuple[int, ...]
    offset: Fraction

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((u * xi for u, xi in zip(self.normal, x)), Fraction(0))

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return self.value(x) - self.offset


@dataclass(frozen=True)
class VertexData:
    vertex: Vector
    weights: Tuple[Tuple[int, ...], ...]
    facets: Tuple[int, ...] = ()


@dataclass
class Validation:
    ok: bool
    diagnostics: List[str] = field(default_factory=list)
    vertex: Optional[Vector] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CenteredRegionDescription:
    """The largest subset centered about base_point: the union of the
    relative interiors of the faces containing it.  Faces are named by their
    sets of active facet indices (the empty set is the whole polytope)."""

    base_point: Vector
    faces: Tuple[Tuple[int, ...], ...]
    excluded_facets: Tuple[int, ...]


def _to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise PolytopeError(f"use exact rationals ('p/q' strings or integers), not floats: {x}")
    return Fraction(x)


@dataclass(frozen=True)
class DelzantPolytope:
    dim: int
    facets: Tuple[Facet, ...]

    def __post_init__(self):
        facets = []
        for i, f in enumerate(self.facets):
            if not isinstance(f, Facet):
                normal, offset = f
                f = Facet(tuple(normal), _to_fraction(offset))
            normal = tuple(f.normal)
            if len(normal) != self.dim:
                raise PolytopeError(f"facet {i}: normal {list(normal)} has length {len(normal)}, expected {self.dim}")
            if any(not isinstance(u, int) or isinstance(u, bool) for u in normal):
                raise PolytopeError(f"facet {i}: normal {list(normal)} must be integral")
            g = 0
            for u in normal:
                g = gcd(g, u)
            if g != 1:
                raise PolytopeError(f"facet {i}: normal {list(normal)} is not primitive")
            facets.append(Facet(normal, _to_fraction(f.offset)))
        object.__setattr__(self, "facets", tuple(facets))

    @classmethod
    def from_json(cls, data) -> "DelzantPolytope":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            dim = int(data["dim"])
            facets = [(tuple(f["normal"]), f["offset"]) for f in data["facets"]]
        except (KeyError, TypeError) as exc:
            raise PolytopeError(f"malformed polytope description: missing {exc}") from exc
        return cls(dim, tuple(facets))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [{"normal": list(f.normal), "offset": _fstr(f.offset)} for f in self.facets],
        }

    def contains(self, x: Sequence) -> bool:
        x = [_to_fraction(v) for v in x]
        return all(f.slack(x) >= 0 for f in self.facets)

    def active(self, x: Sequence) -> Tuple[int, ...]:
        x = [_to_fraction(v) for v in x]
        return tuple(i for i, f in enumerate(self.facets) if f.slack(x) == 0)

    def vertices(self) -> List[VertexData]:
        """Vertices with their primitive edge vectors, for simple vertices.

        Enumerates d-subsets of facets; fine for a dozen facets in dimension <= 4.
        """
        return list(_vertex_table(self)[0])

    def transform(self, A: Sequence[Sequence[int]], b: Sequence = None) -> "DelzantPolytope":
        """Image under x -> A x + b with A in GL(d, Z)."""
        Ainv = _inverse([[Fraction(a) for a in row] for row in A])
        if Ainv is None or any(x.denominator != 1 for row in Ainv for x in row):
            raise ValueError("A must be unimodular")
        b = [Fraction(0)] * self.dim if b is None else [_to_fraction(v) for v in b]
        facets = []
        for f in self.facets:
            # <u, A^-1 (y - b)> >= c  <=>  <A^-T u, y> >= c + <A^-T u, b>
            normal = tuple(int(sum(Ainv[j][i] * f.normal[j] for j in range(self.dim))) for i in range(self.dim))
            offset = f.offset + sum((normal[i] * b[i] for i in range(self.dim)), Fraction(0))
            facets.append(Facet(normal, offset))
        return DelzantPolytope(self.dim, tuple(facets))

    def dilate(self, t) -> "DelzantPolytope":
        t = _to_fraction(t)
        if t <= 0:
            raise ValueError("dilation factor must be positive")
        return DelzantPolytope(self.dim, tuple(Facet(f.normal, f.offset * t) for f in self.facets))


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _inverse(M: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    """Exact Gauss-Jordan inverse; None if singular."""
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _det(M: Sequence[Sequence[int]]) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            factor = A[r][col] / A[col][col]
            A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    return det


def _primitive(v: Sequence[Fraction]) -> Tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@lru_cache(maxsize=256)
def _vertex_table(P: DelzantPolytope):
    """(simple vertices, diagnostics of non-simple vertices, all vertex points)."""
    d = P.dim
    seen = {}
    for subset in itertools.combinations(range(len(P.facets)), d):
        U = [[Fraction(u) for u in P.facets[i].normal] for i in subset]
        Uinv = _inverse(U)
        if Uinv is None:
            continue
        c = [P.facets[i].offset for i in subset]
        x = tuple(sum((Uinv[r][j] * c[j] for j in range(d)), Fraction(0)) for r in range(d))
        if x in seen or not all(f.slack(x) >= 0 for f in P.facets):
            continue
        seen[x] = P.active(x)
    simple, problems = [], []
    for x in sorted(seen):
        act = seen[x]
        if len(act) != d:
            problems.append(f"vertex {_vstr(x)} lies on {len(act)} facets {list(act)}, expected {d} (not simple)")
            continue
        Uinv = _inverse([[Fraction(u) for u in P.facets[i].normal] for i in act])
        edges = tuple(_primitive([Uinv[r][j] for r in range(d)]) for j in range(d))
        simple.append(VertexData(x, edges, act))
    return simple, problems, sorted(seen)


def _vstr(x: Sequence[Fraction]) -> str:
    return "(" + ", ".join(_fstr(v) for v in x) + ")"


def validate_delzant(P: DelzantPolytope) -> Validation:
    """Check boundedness, full dimension, simplicity and smoothness.

    Unbounded, empty and lower-dimensional input raises :class:`PolytopeError`;
    a bounded polytope that is not Delzant returns a failed
    :class:`Validation` naming the first offending vertex.
    """
    simple, problems, points = _vertex_table(P)
    if not points:
        raise PolytopeError("no vertices: the region is empty, unbounded, or lower-dimensional")
    for v in simple:
        for j, eta in enumerate(v.weights):
            if not any(f.value(eta) < 0 for f in P.facets):
                raise PolytopeError(f"unbounded: the edge ray from vertex {_vstr(v.vertex)} along {list(eta)} never exits")
    centroid = tuple(sum(p[i] for p in points) / len(points) for i in range(P.dim))
    flat = [i for i, f in enumerate(P.facets) if f.slack(centroid) == 0]
    if flat:
        raise PolytopeError(f"lower-dimensional: every vertex satisfies facet {flat[0]} with equality")
    if problems:
        first = problems[0]
        bad = next(p for p in points if len(P.active(p)) != P.dim)
        return Validation(False, [first], bad)
    touched = {i for v in simple for i in v.facets}
    for i in range(len(P.facets)):
        if i not in touched:
            return Validation(False, [f"facet {i} touches no vertex (redundant inequality)"], None)
    for v in simple:
        det = _det(v.weights)
        if abs(det) != 1:
            msg = (f"vertex {_vstr(v.vertex)}: edge vectors {[list(e) for e in v.weights]} "
                   f"have determinant {_fstr(det)}, not a lattice basis (not smooth)")
            return Validation(False, [msg], v.vertex)
    return Validation(True, [], None)


def centered_region(P: DelzantPolytope, alpha: Sequence) -> CenteredRegionDescription:
    """Faces of P containing alpha, i.e. all subsets of the facets active at alpha."""
    alpha = tuple(_to_fraction(a) for a in alpha)
    if len(alpha) != P.dim:
        raise ValueError(f"point has dimension {len(alpha)}, polytope has {P.dim}")
    if not P.contains(alpha):
        raise ValueError(f"{_vstr(alpha)} is not in the polytope")
    act = P.active(alpha)
    faces = [s for r in range(len(act) + 1) for s in itertools.combinations(act, r)]
    excluded = tuple(i for i in range(len(P.facets)) if i not in act)
    return CenteredRegionDescription(alpha, tuple(faces), excluded)


def find_vertex(P: DelzantPolytope, point: Sequence) -> VertexData:
    point = tuple(_to_fraction(x) for x in point)
    for v in P.vertices():
        if v.vertex == point:
            return v
    raise ValueError(f"{_vstr(point)} is not a vertex")


def vertex_capacity(P: DelzantPolytope, v: VertexData) -> Fraction:
    """Largest a with {v + sum x_j eta_j : x >= 0, sum x_j <= a} inside P.

    min over facets (u, c) missing v of (<u,v> - c) / max_j(-<u, eta_j>),
    taken over facets with some <u, eta_j> < 0.
    """
    if v not in P.vertices():
        raise ValueError(f"{_vstr(v.vertex)} with weights {v.weights} is not a vertex of this polytope")
    best = None
    for f in P.facets:
        gap = f.slack(v.vertex)
        if gap == 0:
            continue
        steepest = max(-f.value(eta) for eta in v.weights)
        if steepest <= 0:
            continue
        a = gap / steepest
        best = a if best is None or a < best else best
    if best is None:
        raise PolytopeError(f"vertex {_vstr(v.vertex)}: no facet bounds the simplex (unbounded polytope)")
    return best


def vertex_capacities(P: DelzantPolytope) -> List[Tuple[VertexData, Fraction]]:
    return [(v, vertex_capacity(P, v)) for v in P.vertices()]


def toric_lower_bound(P: DelzantPolytope) -> Fraction:
    """Best ball capacity over all vertices; a lower bound for the Gromov width."""
    check = validate_delzant(P)
    if not check:
        raise PolytopeError("not a Delzant polytope", check.diagnostics)
    return max(cap for _, cap in vertex_capacities(P))


# small library of standard examples

def box(*sides) -> DelzantPolytope:
    d = len(sides)
    facets = []
    for i, s in enumerate(sides):
        e = [0] * d
        e[i] = 1
        facets.append((tuple(e), 0))
        facets.append((tuple(-x for x in e), -_to_fraction(s)))
    return DelzantPolytope(d, tuple(facets))


def simplex(d: int, size=1) -> DelzantPolytope:
    """{x >= 0, sum x <= size}, the moment polytope of CP^d."""
    facets = [(tuple(int(i == j) for j in range(d)), 0) for i in range(d)]
    facets.append(((-1,) * d, -_to_fraction(size)))
    return DelzantPolytope(d, tuple(facets))
