"""Gr(k, n) in the graph chart centered at the coordinate plane C^k x {0}.

A point is an (n-k) x k complex matrix B, the plane being {(v, Bv)}.  Real
chart coordinates interleave real and imaginary parts of the entries of B in
row-major order: (Re b_11, Im b_11, Re b_12, Im b_12, ...).

The symplectic form is i d dbar K with K = (1/2pi) log det(I + B^* B).  This
normalization gives a projective line area 1, so [omega] generates
H^2(Gr(k,n); Z).  At B = 0 the form is (1/pi) times the standard form, and in
the rescaled coordinates z = B / sqrt(pi) the circle moment map starts as
pi * sum |z_j|^2 * eta_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import integrate

from .schubert import BoxContext

# rescaling between chart entries b and Darboux coordinates z with omega(0) = omega_std
DARBOUX_SCALE = np.sqrt(np.pi)


@dataclass(frozen=True)
class GraphChartPoint:
    ctx: BoxContext
    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=complex)
        if B.shape != (self.ctx.n - self.ctx.k, self.ctx.k):
            raise ValueError(f"B must have shape {(self.ctx.n - self.ctx.k, self.ctx.k)}, got {B.shape}")
        object.__setattr__(self, "B", B)

    @classmethod
    def origin(cls, ctx: BoxContext) -> "GraphChartPoint":
        return cls(ctx, np.zeros((ctx.n - ctx.k, ctx.k), dtype=complex))

    @classmethod
    def from_coords(cls, ctx: BoxContext, x: Sequence[float]) -> "GraphChartPoint":
        x = np.asarray(x, dtype=float)
        z = x[0::2] + 1j * x[1::2]
        return cls(ctx, z.reshape(ctx.n - ctx.k, ctx.k))

    def coords(self) -> np.ndarray:
        z = self.B.ravel()
        out = np.empty(2 * z.size)
        out[0::2] = z.real
        out[1::2] = z.imag
        return out

    def to_json(self) -> dict:
        return {
            "k": self.ctx.k,
            "n": self.ctx.n,
            "B_re": self.B.real.tolist(),
            "B_im": self.B.imag.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphChartPoint":
        ctx = BoxContext(int(data["k"]), int(data["n"]))
        return cls(ctx, np.asarray(data["B_re"], dtype=float) + 1j * np.asarray(data["B_im"], dtype=float))


@dataclass(frozen=True)
class CircleActionSpec:
    """S^1 = R/Z acting on C^n by a.z = (a^m_1 z_1, ..., a^m_n z_n)."""

    ctx: BoxContext
    m: Tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(w) for w in self.m)
        if len(m) != self.ctx.n:
            raise ValueError(f"weight vector must have length n={self.ctx.n}")
        object.__setattr__(self, "m", m)

    @classmethod
    def standard(cls, ctx: BoxContext) -> "CircleActionSpec":
        """Fixes the first k coordinates and rotates the last n-k."""
        return cls(ctx, (0,) * ctx.k + (1,) * (ctx.n - ctx.k))

    def chart_weights(self) -> np.ndarray:
        """W[j, i] = m_{k+j} - m_i: the action is B_ji -> a^W[j,i] B_ji in the chart."""
        k = self.ctx.k
        m = np.asarray(self.m)
        return (m[k:, None] - m[None, :k]).astype(float)


@dataclass(frozen=True)
class FixedPointLabel:
    """The coordinate plane span{e_i : i in S}, indices 1-based."""

    S: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(int(i) for i in self.S)))

    @classmethod
    def base(cls, ctx: BoxContext) -> "FixedPointLabel":
        return cls(tuple(range(1, ctx.k + 1)))


def _pq_inverses(B: np.ndarray):
    k = B.shape[1]
    P = np.eye(k) + B.conj().T @ B
    Q = np.eye(B.shape[0]) + B @ B.conj().T
    return np.linalg.inv(P), np.linalg.inv(Q)


def hermitian_metric(pt: GraphChartPoint) -> np.ndarray:
    """g_{a bbar} = d^2 K / dz_a dzbar_b, indexed by flattened entries of B.

    From d dbar log det(I + B^*B)(U, V) = tr(P^-1 V^* Q^-1 U) with
    P = I + B^*B and Q = I + BB^*.
    """
    Pinv, Qinv = _pq_inverses(pt.B)
    rows, cols = pt.B.shape
    g = np.einsum("ik,lj->jilk", Pinv, Qinv) / (2 * np.pi)
    return g.reshape(rows * cols, rows * cols)


def symplectic_form_at(pt: GraphChartPoint) -> np.ndarray:
    """Coefficient matrix Omega of omega in real chart coordinates,
    omega(u, v) = u^T Omega v."""
    g = hermitian_metric(pt)
    # omega(U, V) = -2 Im(U^T g Vbar); real basis vectors are 1 and i in each slot
    m = g.shape[0]
    Omega = np.empty((2 * m, 2 * m))
    Omega[0::2, 0::2] = -2 * g.imag
    Omega[0::2, 1::2] = 2 * g.real
    Omega[1::2, 0::2] = -2 * g.real
    Omega[1::2, 1::2] = -2 * g.imag
    return Omega + 0.0  # no negative zeros


def moment_map_circle(pt: GraphChartPoint, act: CircleActionSpec) -> float:
    """Circle moment map, zero at B = 0, with iota(xi) omega = -d Phi.

    Phi = 2 pi sum_a w_a z_a dK/dz_a = tr(P^-1 B^* (W o B)).
    """
    B = pt.B
    Pinv, _ = _pq_inverses(B)
    W = act.chart_weights()
    return float(np.real(np.trace(Pinv @ B.conj().T @ (W * B))))


def act_on_point(pt: GraphChartPoint, act: CircleActionSpec, theta: float) -> GraphChartPoint:
    """Apply a = exp(2 pi i theta) to the plane itself and re-read its graph."""
    k = pt.ctx.k
    frame = np.vstack([np.eye(k), pt.B])
    rotated = np.exp(2j * np.pi * theta * np.asarray(act.m, dtype=float))[:, None] * frame
    top, bottom = rotated[:k], rotated[k:]
    return GraphChartPoint(pt.ctx, bottom @ np.linalg.inv(top))


def action_vector_field(pt: GraphChartPoint, act: CircleActionSpec, h: float = 1e-5) -> np.ndarray:
    """Generator of the action in real coordinates, by central differences in theta."""
    plus = act_on_point(pt, act, h).coords()
    minus = act_on_point(pt, act, -h).coords()
    return (plus - minus) / (2 * h)


def isotropy_weights(fp: FixedPointLabel, act: CircleActionSpec) -> list:
    """Weights {m_j - m_i : i in S, j not in S} of the action on T_S = Hom(V_S, V_S^c)."""
    n = act.ctx.n
    if len(fp.S) != act.ctx.k or not set(fp.S) <= set(range(1, n + 1)):
        raise ValueError(f"fixed point {fp.S} is not a k-subset of 1..{n}")
    inside = [act.m[i - 1] for i in fp.S]
    outside = [act.m[j - 1] for j in range(1, n + 1) if j not in fp.S]
    return sorted(mj - mi for mi in inside for mj in outside)


def verify_moment_equation(pt: GraphChartPoint, act: CircleActionSpec, h: float = 1e-4) -> float:
    """Max-norm discrepancy of iota(xi) omega + d Phi at pt.

    xi comes from differentiating the action curve, d Phi from central
    differences with step h; both errors are O(h^2).
    """
    if h <= 0:
        raise ValueError("step must be positive")
    x = pt.coords()
    xi = action_vector_field(pt, act, h)
    lhs = xi @ symplectic_form_at(pt)
    grad = np.empty_like(x)
    for a in range(x.size):
        e = np.zeros_like(x)
        e[a] = h
        grad[a] = (moment_map_circle(GraphChartPoint.from_coords(pt.ctx, x + e), act)
                   - moment_map_circle(GraphChartPoint.from_coords(pt.ctx, x - e), act)) / (2 * h)
    return float(np.max(np.abs(lhs + grad)))


def closedness_residual(pt: GraphChartPoint, h: float = 1e-4) -> float:
    """Max |d omega| by central differences: d_a O_bc + d_b O_ca + d_c O_ab."""
    x = pt.coords()
    dim = x.size
    dO = np.empty((dim, dim, dim))
    for a in range(dim):
        e = np.zeros(dim)
        e[a] = h
        dO[a] = (symplectic_form_at(GraphChartPoint.from_coords(pt.ctx, x + e))
                 - symplectic_form_at(GraphChartPoint.from_coords(pt.ctx, x - e))) / (2 * h)
    cyc = dO + np.transpose(dO, (1, 2, 0)) + np.transpose(dO, (2, 0, 1))
    return float(np.max(np.abs(cyc)))


def line_area(ctx: BoxContext, tol: float = 1e-12) -> float:
    """Symplectic area of the line {B = z E_11} in the chart, by quadrature.

    The chart misses a single point of this projective line, so this is the
    area of the whole line.
    """

    def density(rho, phi):
        B = np.zeros((ctx.n - ctx.k, ctx.k), dtype=complex)
        B[0, 0] = rho * np.exp(1j * phi)
        return symplectic_form_at(GraphChartPoint(ctx, B))[0, 1] * rho

    # rho = tan(u) maps [0, pi/2) onto [0, inf)
    val, _ = integrate.dblquad(
        lambda u, phi: density(np.tan(u), phi) / np.cos(u) ** 2,
        0.0, 2 * np.pi, 0.0, np.pi / 2, epsabs=tol, epsrel=tol,
    )
    return float(val)
