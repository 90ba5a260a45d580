"""Independent reference computations used only by the test suite.

Nothing here imports the code under test except for plain data types.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

import numpy as np
from scipy import integrate


# --- Schur polynomials by monomial enumeration --------------------------------

def _ssyt(shape, nvars):
    """All semistandard tableaux of ``shape`` with entries 0..nvars-1."""
    cells = [(r, c) for r, row in enumerate(shape) for c in range(row)]
    fill = {}

    def rec(i):
        if i == len(cells):
            yield dict(fill)
            return
        r, c = cells[i]
        lo = 0
        if c > 0:
            lo = max(lo, fill[(r, c - 1)])
        if r > 0:
            lo = max(lo, fill[(r - 1, c)] + 1)
        for v in range(lo, nvars):
            fill[(r, c)] = v
            yield from rec(i + 1)
            del fill[(r, c)]

    yield from rec(0)


def schur_poly(shape, nvars):
    """s_shape(x_1..x_nvars) as {exponent tuple: coefficient}."""
    poly = defaultdict(int)
    for t in _ssyt(list(shape), nvars):
        e = [0] * nvars
        for v in t.values():
            e[v] += 1
        poly[tuple(e)] += 1
    return dict(poly)


def poly_mul(a, b):
    out = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c}


def schur_coefficient(f, nu, nvars):
    """Coefficient of s_nu in symmetric f: coefficient of x^(nu+delta) in f * a_delta."""
    delta = list(range(nvars - 1, -1, -1))
    vander = defaultdict(int)
    for perm in itertools.permutations(range(nvars)):
        sign = 1
        for i in range(nvars):
            for j in range(i + 1, nvars):
                if perm[i] > perm[j]:
                    sign = -sign
        e = [0] * nvars
        for i, p in enumerate(perm):
            e[p] = delta[i]
        vander[tuple(e)] += sign
    prod = poly_mul(f, dict(vander))
    target = tuple(list(nu) + [0] * (nvars - len(nu)))
    target = tuple(t + d for t, d in zip(target, delta))
    return prod.get(target, 0)


def lr_bruteforce(lam, mu, nu, nvars=None):
    nvars = nvars or max(len(nu), 1)
    f = poly_mul(schur_poly(lam, nvars), schur_poly(mu, nvars))
    return schur_coefficient(f, nu, nvars)


# --- quantum cohomology of Gr(k,n) by the root-of-unity (Vafa-Intriligator) sum

def _box(k, cols):
    if k == 0:
        yield ()
        return
    for first in range(cols, -1, -1):
        for rest in _box(k - 1, first):
            yield (first,) + rest


def _schur_eval(shape, x):
    k = len(x)
    lam = list(shape) + [0] * (k - len(shape))
    num = np.array([[xi ** (lam[j] + k - 1 - j) for j in range(k)] for xi in x])
    den = np.array([[xi ** (k - 1 - j) for j in range(k)] for xi in x])
    return np.linalg.det(num) / np.linalg.det(den)


def quantum_table_roots(k, n):
    """All structure constants of QH*(Gr(k,n)) at q=1 via the spectrum.

    The spectrum points are k-subsets of the roots of x^n = (-1)^(k-1); the
    Schur values there are the characters, with weights |Vandermonde|^2 / n^k.
    Returns {(lam, mu, nu): (coefficient, degree)}.
    """
    c = (-1) ** (k - 1)
    roots = [np.exp(1j * (np.angle(c) + 2 * np.pi * j) / n) for j in range(n)]
    subsets = list(itertools.combinations(roots, k))
    shapes = [tuple(p for p in s if p) for s in _box(k, n - k)]
    chars = np.array([[_schur_eval(s, I) for s in shapes] for I in subsets])
    weights = np.array([abs(np.prod([a - b for a, b in itertools.combinations(I, 2)])) ** 2 / n ** k for I in subsets])
    out = {}
    for a, lam in enumerate(shapes):
        for b, mu in enumerate(shapes):
            for c_, nu in enumerate(shapes):
                val = np.sum(chars[:, a] * chars[:, b] * np.conj(chars[:, c_]) * weights)
                coeff = int(round(val.real))
                assert abs(val - coeff) < 1e-6, (lam, mu, nu, val)
                if coeff:
                    d, rem = divmod(sum(lam) + sum(mu) - sum(nu), n)
                    assert rem == 0
                    out[(lam, mu, nu)] = (coeff, d)
    return out, chars, weights


# --- grassmannian potential, independent of the closed-form metric ------------

def potential(b_real, k, n):
    """(1/2pi) log det(I + B^* B) for B given as interleaved real coordinates."""
    z = b_real[0::2] + 1j * b_real[1::2]
    B = z.reshape(n - k, k)
    return np.log(np.linalg.det(np.eye(k) + B.conj().T @ B).real) / (2 * np.pi)


def form_from_potential(b_real, k, n, h=1e-4):
    """omega = i d dbar K from central second differences of the potential.

    The complex Hessian g_ab = d^2 K / dz_a dzbar_b is assembled from real
    second derivatives, then converted with omega(U, V) = -2 Im(U^T g Vbar).
    """
    m = len(b_real) // 2
    H = np.zeros((m, m), dtype=complex)
    e = np.eye(2 * m)

    def K(x):
        return potential(x, k, n)

    # d^2/dz_a dzbar_b = (1/4)(d_xa d_xb + d_ya d_yb + i(d_xa d_yb - d_ya d_xb))
    def second(i, j):
        return (K(b_real + h * e[i] + h * e[j]) - K(b_real + h * e[i] - h * e[j])
                - K(b_real - h * e[i] + h * e[j]) + K(b_real - h * e[i] - h * e[j])) / (4 * h * h)

    for a in range(m):
        for b in range(m):
            xa, ya, xb, yb = 2 * a, 2 * a + 1, 2 * b, 2 * b + 1
            H[a, b] = 0.25 * (second(xa, xb) + second(ya, yb) + 1j * (second(xa, yb) - second(ya, xb)))
    Omega = np.zeros((2 * m, 2 * m))
    for p in range(2 * m):
        for q in range(2 * m):
            U = np.zeros(m, dtype=complex)
            V = np.zeros(m, dtype=complex)
            U[p // 2] = 1 if p % 2 == 0 else 1j
            V[q // 2] = 1 if q % 2 == 0 else 1j
            Omega[p, q] = -2 * np.imag(U @ H @ np.conj(V))
    return Omega


# --- toric: largest simplex by exhaustive rational candidates -----------------

def simplex_capacity_bruteforce(facets, vertex, weights):
    """Largest a such that conv(vertex, vertex + a*eta_j) sits in the polytope.

    Candidates are all a at which some simplex corner reaches some facet
    hyperplane; each candidate is tested for corner containment exactly.
    """
    def inside(point):
        return all(sum(Fraction(u) * x for u, x in zip(normal, point)) >= offset for normal, offset in facets)

    candidates = set()
    for normal, offset in facets:
        base = sum(Fraction(u) * x for u, x in zip(normal, vertex))
        for eta in weights:
            slope = sum(Fraction(u) * e for u, e in zip(normal, eta))
            if slope < 0:
                candidates.add((offset - base) / slope)
    best = Fraction(0)
    for a in sorted(candidates):
        if a <= 0:
            continue
        corners = [[x + a * e for x, e in zip(vertex, eta)] for eta in weights]
        if all(inside(c) for c in corners):
            best = max(best, a)
    return best


# --- moser: radial area map ---------------------------------------------------

def radial_moment(density, r):
    """Phi(r) = 2 pi int_0^r rho f(rho^2) d rho for an area density f(r^2)."""
    val, _ = integrate.quad(lambda rho: 2 * np.pi * rho * density(rho * rho), 0.0, r, epsabs=1e-14, epsrel=1e-13)
    return val


def radial_area_map(density, x):
    """z -> z * g(|z|) with pi |image|^2 = Phi(z), preserving the angle."""
    r = np.hypot(x[0], x[1])
    if r == 0:
        return np.zeros(2)
    target = np.sqrt(radial_moment(density, r) / np.pi)
    return np.asarray(x) * (target / r)
