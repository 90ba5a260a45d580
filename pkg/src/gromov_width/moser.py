"""Ball embeddings by Moser's method, in an equivariant chart.

Given a circle-invariant form omega with moment map Phi on a star-shaped
chart (see ``chart_forms``), the embedding of {Phi < e^t V} is built from:

* the lifted Euler field X~ with dPhi(X~) = Phi, and its flow psi~_t
  under -X~, so that Phi o psi~_t = e^-t Phi;
* the rescaled forms omega_t = e^t psi~_t^* omega, all with moment map Phi
  and primitives lambda_t = e^t psi~_t^* lambda;
* the Moser field Y_t with iota(Y_t) omega_t = -d/dt lambda_t, and its
  isotopy G_t with G_t^* omega_t = omega;
* the composite E_t = e^{t/2} F o psi~_t o G_t, where F is the Darboux chart
  that is valid near the origin.

Then E_t^* omega_std = omega on {Phi < e^t V}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .chart_forms import ChartForm, _smoothstep, rotate, standard_matrix
from .flows import StepGrid, rk4_variational


class MoserError(RuntimeError):
    """A construction stage failed; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class MoserGrid:
    psi: StepGrid = field(default_factory=StepGrid)
    moser_step: float = 0.25
    beta_delta: float = 2e-3
    fd_step: float = 1e-5
    quad_nodes: int = 16
    quad_panels: int = 16
    blend: tuple = (0.2, 0.8)
    max_halvings: int = 0
    stabilize_tol: float = 1e-7

    def halved(self) -> "MoserGrid":
        return MoserGrid(self.psi.halved(), self.moser_step / 2, self.beta_delta / 2, self.fd_step,
                         self.quad_nodes, self.quad_panels, self.blend, self.max_halvings, self.stabilize_tol)

    def to_json(self) -> dict:
        return {
            "psi_largest_step": self.psi.largest,
            "psi_first_step": self.psi.first,
            "psi_growth": self.psi.growth,
            "moser_step": self.moser_step,
            "beta_delta": self.beta_delta,
            "fd_step": self.fd_step,
            "quad_nodes": self.quad_nodes,
            "quad_panels": self.quad_panels,
            "blend": list(self.blend),
        }


def _batch(x):
    x = np.asarray(x, dtype=float)
    return x[None] if x.ndim == 1 else x, x.ndim == 1


def _stack_fd(y, h):
    d = y.shape[1]
    E = np.eye(d) * h
    return np.concatenate([y] + [y + e for e in E] + [y - e for e in E])


def _unstack_fd(vals, N, d, h):
    """Split a stacked evaluation into the value at y and its Jacobian."""
    vals = vals.reshape(1 + 2 * d, N, -1)
    jac = (vals[1:1 + d] - vals[1 + d:]) / (2 * h)
    return vals[0], np.transpose(jac, (1, 2, 0))


# --- primitive -----------------------------------------------------------------

def _quadrature(nodes: int, panels: int):
    tq, wq = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    return ((b - a) / 2 * tq + (a + b) / 2).ravel(), ((b - a) / 2 * wq).ravel()


def radial_primitive(cf: ChartForm, x, nodes: int = 16, panels: int = 16) -> np.ndarray:
    """lambda(x).w = int_0^1 t omega(tx)(x, w) dt, composite Gauss-Legendre.

    Exact (to rounding) wherever omega is constant along the segment.
    """
    X, single = _batch(x)
    if not np.all(cf.in_domain(X)):
        raise MoserError("primitive", "segment [0, x] leaves the domain")
    tq, wq = _quadrature(nodes, panels)
    N, d = X.shape
    pts = (tq[:, None, None] * X[None]).reshape(-1, d)
    Om = cf.omega(pts).reshape(len(tq), N, d, d)
    lam = np.einsum("q,na,qnab->nb", wq * tq, X, Om)
    return lam[0] if single else lam


def standard_primitive(x) -> np.ndarray:
    """lambda_std = 1/2 sum (x dy - y dx) as a covector."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[..., 0::2] = -0.5 * x[..., 1::2]
    out[..., 1::2] = 0.5 * x[..., 0::2]
    return out


# --- lifted Euler field -----------------------------------------------------------

def _cutoff(cf: ChartForm, Phi, blend):
    V = cf.darboux_cap
    if not math.isfinite(V):
        return np.ones_like(Phi), np.zeros_like(Phi)
    step, dstep = _smoothstep(Phi, blend[0] * V, blend[1] * V)
    return 1 - step, -dstep


def _lift(cf: ChartForm, X: np.ndarray, blend, want_jac: bool):
    N, d = X.shape
    I = np.eye(d)
    Phi = cf.phi(X)
    g = cf.grad(X)
    H = cf.hess(X) if want_jac else None
    s = np.sum(X * X, axis=1)
    origin = s < 1e-24

    if cf.darboux == "identity":
        Xin = 0.5 * X
        Din = np.broadcast_to(0.5 * I, (N, d, d)) if want_jac else None
    else:
        c = np.einsum("na,na->n", g, X)
        c_safe = np.where(origin, 1.0, c)
        Xin = np.where(origin[:, None], 0.5 * X, (Phi / c_safe)[:, None] * X)
        if want_jac:
            dc = np.einsum("nab,nb->na", H, X) + g
            Din = (X[:, :, None] * g[:, None, :] + Phi[:, None, None] * I) / c_safe[:, None, None] \
                - Phi[:, None, None] * X[:, :, None] * dc[:, None, :] / c_safe[:, None, None] ** 2
            Din = np.where(origin[:, None, None], 0.5 * I, Din)

    chi, dchi_dPhi = _cutoff(cf, Phi, blend)
    outer = chi < 1
    gg = np.sum(g * g, axis=1)
    if np.any(outer & (gg < 1e-20) & ~origin):
        raise MoserError("lift", "dPhi vanishes away from the fixed point")
    gg_safe = np.where(outer, gg, 1.0)
    Xout = (Phi / gg_safe)[:, None] * g
    vec = chi[:, None] * Xin + (1 - chi)[:, None] * Xout
    if not want_jac:
        return vec, None
    Hg = np.einsum("nab,nb->na", H, g)
    Dout = (g[:, :, None] * g[:, None, :] + Phi[:, None, None] * H) / gg_safe[:, None, None] \
        - 2 * Phi[:, None, None] * g[:, :, None] * Hg[:, None, :] / gg_safe[:, None, None] ** 2
    dchi = dchi_dPhi[:, None] * g
    D = chi[:, None, None] * Din + (1 - chi)[:, None, None] * Dout + (Xin - Xout)[:, :, None] * dchi[:, None, :]
    return vec, D


def lift_euler(cf: ChartForm, x, blend=(0.2, 0.8)) -> np.ndarray:
    """Invariant field with dPhi(X~) = Phi; equals x/2 where omega is standard.

    Blends the inner field (x/2 for an identity Darboux chart, its pullback
    Phi x / <grad Phi, x> for a radial one) with Phi grad Phi / |grad Phi|^2
    across Phi in [blend[0] V, blend[1] V].
    """
    X, single = _batch(x)
    vec, _ = _lift(cf, X, blend, False)
    return vec[0] if single else vec


def lift_euler_jacobian(cf: ChartForm, x, blend=(0.2, 0.8)) -> np.ndarray:
    X, single = _batch(x)
    _, D = _lift(cf, X, blend, True)
    return D[0] if single else D


# --- psi flow -----------------------------------------------------------------

def _check_inside(cf: ChartForm, y, stage):
    if not np.all(np.isfinite(y)):
        raise MoserError(stage, "integration produced non-finite values")
    if not np.all(cf.in_domain(y)):
        raise MoserError(stage, "flow left the domain")


def _psi_field(cf: ChartForm, grid: MoserGrid):
    """-X~ with its Jacobian, plus exact steps where X~ is the half Euler field.

    With an identity Darboux chart omega is standard on {Phi < V}, where both
    blended fields equal x/2 and the flow is y -> exp(-h/2) y; a step whose
    ends both lie there is taken exactly.
    """

    def field(_, y, want):
        v, D = _lift(cf, y, grid.blend, want)
        return -v, (-D if want else None)

    if cf.darboux != "identity":
        return field, None
    inner = cf.darboux_cap

    def exact(y, J, h):
        f = math.exp(-h / 2)
        y_h = f * y
        mask = (cf.phi(y) < inner) & (cf.phi(y_h) < inner)
        return y_h, f * J, mask

    return field, exact


def psi_flow(cf: ChartForm, x, t: float, grid: MoserGrid = MoserGrid(), with_jacobian: bool = True):
    """psi~_t(x) and its Jacobian: flow of -X~ for time t (negative t flows along +X~)."""
    X, single = _batch(x)
    N, d = X.shape
    field, exact = _psi_field(cf, grid)
    J0 = np.broadcast_to(np.eye(d), (N, d, d)).copy()
    y, J = rk4_variational(field, 0.0, X, J0, grid.psi.steps(t), with_jacobian, exact)
    _check_inside(cf, y, "psi_flow")
    if single:
        return y[0], J[0]
    return y, J


# --- Moser field ---------------------------------------------------------------

def moser_field(cf: ChartForm, s: float, y, grid: MoserGrid = MoserGrid(), return_forms: bool = False):
    """Y_s(y) solving iota(Y) omega_s = -beta_s, beta_s = d/ds lambda_s.

    beta_s is a centered difference: psi~ is integrated to s - delta, then two
    further steps of delta give the states at s and s + delta, so the two
    ends share one trajectory.
    """
    Y0, single = _batch(y)
    N, d = Y0.shape
    delta = grid.beta_delta

    field, exact = _psi_field(cf, grid)
    J0 = np.broadcast_to(np.eye(d), (N, d, d)).copy()
    ya, Ja = rk4_variational(field, 0.0, Y0, J0, grid.psi.steps(s - delta), exact=exact)
    ym, Jm = rk4_variational(field, 0.0, ya, Ja, [delta], exact=exact)
    yb, Jb = rk4_variational(field, 0.0, ym, Jm, [delta], exact=exact)
    _check_inside(cf, yb, "psi_flow")
    _check_inside(cf, ya, "psi_flow")

    lam = radial_primitive(cf, np.concatenate([ya, yb]), grid.quad_nodes, grid.quad_panels)
    lam_a = math.exp(s - delta) * np.einsum("nba,nb->na", Ja, lam[:N])
    lam_b = math.exp(s + delta) * np.einsum("nba,nb->na", Jb, lam[N:])
    beta = (lam_b - lam_a) / (2 * delta)

    om = math.exp(s) * np.einsum("nba,nbc,ncd->nad", Jm, cf.omega(ym), Jm)
    cond = np.linalg.cond(om)
    if not np.all(np.isfinite(cond)) or np.max(cond) > 1e12:
        raise MoserError("moser_solve", "omega_t is numerically singular")
    Y = np.linalg.solve(np.transpose(om, (0, 2, 1)), -beta[:, :, None])[:, :, 0]
    if cf.darboux == "identity":
        # psi~ keeps {Phi < V} inside itself, and there omega_s and lambda_s are standard
        Y[cf.phi(Y0) < cf.darboux_cap] = 0.0
    if return_forms:
        out = Y, om, beta
        return tuple(v[0] for v in out) if single else out
    return Y[0] if single else Y


def _moser_field_with_jac(cf, s, y, grid, want):
    N, d = y.shape
    if not want:
        return moser_field(cf, s, y, grid), None
    vals = moser_field(cf, s, _stack_fd(y, grid.fd_step), grid)
    return _unstack_fd(vals, N, d, grid.fd_step)


def moser_isotopy(cf: ChartForm, x, t: float, grid: MoserGrid = MoserGrid(), with_jacobian: bool = True):
    """G_t(x) and DG_t(x): flow of the time-dependent field Y_s from s = 0."""
    X, single = _batch(x)
    N, d = X.shape
    n = max(1, math.ceil(t / grid.moser_step - 1e-12)) if t > 0 else 0
    steps = [t / n] * n if n else []
    J0 = np.broadcast_to(np.eye(d), (N, d, d)).copy()
    y, J = rk4_variational(lambda s, z, want: _moser_field_with_jac(cf, s, z, grid, want),
                           0.0, X, J0, steps, with_jacobian)
    _check_inside(cf, y, "isotopy")
    if single:
        return y[0], J[0]
    return y, J


# --- composite map ---------------------------------------------------------------

class FlowMap:
    """Composite e^{t/2} F o psi~_t o G_t, the equivariant embedding at time t.

    Evaluation integrates the flows pointwise; nothing is shared between
    calls, so concurrent evaluation is safe.
    """

    def __init__(self, cf: ChartForm, t_final: float, grid: Optional[MoserGrid] = None):
        if not t_final >= 0:
            raise ValueError("t_final must be nonnegative")
        self.cf = cf
        self.t_final = float(t_final)
        self.grid = default_grid(cf) if grid is None else grid

    def region_bound(self, t: Optional[float] = None) -> float:
        """Points with Phi below this value are in the domain of the time-t map."""
        t = self.t_final if t is None else t
        return min(self.cf.cap, math.exp(t) * self.cf.darboux_cap)

    def _check_time(self, t):
        t = self.t_final if t is None else float(t)
        if not 0 <= t <= self.t_final + 1e-12:
            raise ValueError(f"t must lie in [0, {self.t_final}]")
        return t

    def _prepare(self, x, t):
        X, single = _batch(x)
        if X.shape[1] != self.cf.dim:
            raise ValueError(f"points must have {self.cf.dim} coordinates")
        Phi = self.cf.phi(X)
        if np.any(Phi >= self.region_bound(t)):
            raise MoserError("domain", f"sample outside Phi < {self.region_bound(t):.6g}")
        return X, single

    def stages(self, t, x, with_jacobian: bool = True) -> dict:
        t = self._check_time(t)
        X, single = self._prepare(x, t)
        G, DG = moser_isotopy(self.cf, X, t, self.grid, with_jacobian)
        P, DP = psi_flow(self.cf, G, t, self.grid, with_jacobian)
        F, DF = self.cf.darboux_map(P)
        scale = math.exp(t / 2)
        out = {"G": G, "psi": P, "image": scale * F}
        if with_jacobian:
            out["jacobian"] = scale * np.einsum("nab,nbc,ncd->nad", DF, DP, DG)
        if single:
            out = {k: v[0] for k, v in out.items()}
        return out

    def evaluate(self, t, x) -> np.ndarray:
        return self.stages(t, x, with_jacobian=False)["image"]

    def jacobian(self, t, x) -> np.ndarray:
        return self.stages(t, x)["jacobian"]

    def __call__(self, x):
        return self.evaluate(self.t_final, x)


class ScaledMap:
    """A map multiplied by a constant: symplectic only when the factor is +-1."""

    def __init__(self, base: FlowMap, factor: float):
        self.base, self.factor = base, factor
        self.t_final = base.t_final

    def evaluate(self, t, x):
        return self.factor * self.base.evaluate(t, x)

    def jacobian(self, t, x):
        return self.factor * self.base.jacobian(t, x)


def default_grid(cf: ChartForm) -> MoserGrid:
    return MoserGrid(moser_step=cf.moser_step)


def construct_embedding(cf: ChartForm, t_final: float, grid: Optional[MoserGrid] = None,
                        probes: Optional[np.ndarray] = None) -> FlowMap:
    """The embedding of {Phi < e^t_final V}.

    With ``grid.max_halvings > 0`` and probe points, steps are halved until
    the map at the probes moves by less than ``grid.stabilize_tol``.
    """
    if not (isinstance(t_final, (int, float)) and t_final >= 0):
        raise ValueError("t_final must be a nonnegative number")
    fmap = FlowMap(cf, t_final, grid)
    grid = fmap.grid
    if grid.max_halvings <= 0 or probes is None:
        return fmap
    current = fmap.evaluate(t_final, probes)
    for _ in range(grid.max_halvings):
        finer = FlowMap(cf, t_final, fmap.grid.halved())
        nxt = finer.evaluate(t_final, probes)
        change = float(np.max(np.abs(nxt - current)))
        fmap, current = finer, nxt
        if change < grid.stabilize_tol:
            break
    return fmap


# --- verification --------------------------------------------------------------------

def _fd_map_jacobian(fmap, t, X, h):
    N, d = X.shape
    vals = fmap.evaluate(t, _stack_fd(X, h))
    return _unstack_fd(vals, N, d, h)[1]


def pullback_residual(fmap, cf: ChartForm, samples, h: Optional[float] = None, t: Optional[float] = None) -> float:
    """max |J^T Omega_std J - Omega(x)| over the samples.

    J comes from the variational equation, or from central differences with
    step h when h is given or the map has no jacobian.
    """
    X, _ = _batch(samples)
    t = fmap.t_final if t is None else t
    if h is None and hasattr(fmap, "jacobian"):
        J = fmap.jacobian(t, X)
    else:
        J = _fd_map_jacobian(fmap, t, X, h or 1e-5)
    return pullback_from_jacobian(J, cf, X)


def pullback_from_jacobian(J, cf: ChartForm, samples) -> float:
    X, _ = _batch(samples)
    pulled = np.einsum("nba,bc,ncd->nad", np.asarray(J).reshape(len(X), cf.dim, cf.dim), standard_matrix(cf.m), J)
    return float(np.max(np.abs(pulled - cf.omega(X))))


def equivariance_residual(fmap, samples, angles: int = 8, t: Optional[float] = None) -> float:
    """max |map(R x) - R map(x)| over ``angles`` equally spaced rotations."""
    X, _ = _batch(samples)
    t = fmap.t_final if t is None else t
    thetas = np.arange(1, angles + 1) / (angles + 1)
    rotated = np.concatenate([rotate(X, th) for th in thetas])
    images = fmap.evaluate(t, np.concatenate([X, rotated]))
    base, moved = images[:len(X)], images[len(X):].reshape(angles, len(X), -1)
    expected = np.stack([rotate(base, th) for th in thetas])
    return float(np.max(np.abs(moved - expected)))


@dataclass
class PullbackReport:
    pullback: float
    equivariance: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.pullback <= self.tolerance and self.equivariance <= self.tolerance

    @property
    def residual(self) -> float:
        return max(self.pullback, self.equivariance)


def verify_pullback(fmap, cf: ChartForm, samples, h: Optional[float] = None, tolerance: float = 1e-4,
                    t: Optional[float] = None) -> PullbackReport:
    return PullbackReport(
        pullback=pullback_residual(fmap, cf, samples, h, t),
        equivariance=equivariance_residual(fmap, samples, t=t),
        tolerance=tolerance,
    )


def sample_region(cf: ChartForm, count: int, phi_max: float, rng: np.random.Generator) -> np.ndarray:
    """Random points with Phi below phi_max, spread along rays from the origin."""
    out = []
    while sum(len(o) for o in out) < count:
        dirs = rng.normal(size=(count, cf.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        # largest radius on each ray by bisection, radius fraction uniform in area
        lo, hi = np.zeros(count), np.ones(count)
        while True:
            inside = cf.phi(hi[:, None] * dirs) < phi_max
            if not inside.any() or hi.max() > 1e6:
                break
            hi = np.where(inside, 2 * hi, hi)
        for _ in range(60):
            mid = (lo + hi) / 2
            inside = cf.phi(mid[:, None] * dirs) < phi_max
            lo, hi = np.where(inside, mid, lo), np.where(inside, hi, mid)
        frac = np.sqrt(rng.uniform(size=count)) * 0.999
        pts = (frac * lo)[:, None] * dirs
        out.append(pts[cf.phi(pts) < phi_max])
    return np.concatenate(out)[:count]
