"""Circle-invariant symplectic forms on star-shaped chart domains of R^2m.

Coordinates are (x_1, y_1, ..., x_m, y_m) with z_j = x_j + i y_j.  The circle
R/Z acts by z -> exp(2 pi i theta) z in every coordinate (all isotropy
weights one at the origin), generated by xi = 2 pi (-y_1, x_1, ...).  Every
form here is in an equivariant Darboux chart at the origin: omega(0) is the
standard form and Phi(z) = pi |z|^2 + O(|z|^3).

All callables are vectorized over a leading batch axis: points have shape
(N, 2m), forms (N, 2m, 2m).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Array = np.ndarray


def standard_matrix(m: int) -> Array:
    """Omega for omega_std = sum dx_j ^ dy_j."""
    J = np.zeros((2 * m, 2 * m))
    for j in range(m):
        J[2 * j, 2 * j + 1] = 1.0
        J[2 * j + 1, 2 * j] = -1.0
    return J


def rotate(x: Array, theta: float) -> Array:
    """The circle action z -> exp(2 pi i theta) z on each complex coordinate."""
    x = np.asarray(x, dtype=float)
    c, s = math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta)
    out = np.empty_like(x)
    out[..., 0::2] = c * x[..., 0::2] - s * x[..., 1::2]
    out[..., 1::2] = s * x[..., 0::2] + c * x[..., 1::2]
    return out


def rotation_field(x: Array) -> Array:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[..., 0::2] = -2 * math.pi * x[..., 1::2]
    out[..., 1::2] = 2 * math.pi * x[..., 0::2]
    return out


def _hermitian_to_real(g: Array) -> Array:
    """omega(U, V) = -2 Im(U^T g Vbar) as a real (N, 2m, 2m) matrix."""
    N, m, _ = g.shape
    Om = np.empty((N, 2 * m, 2 * m))
    Om[:, 0::2, 0::2] = -2 * g.imag
    Om[:, 0::2, 1::2] = 2 * g.real
    Om[:, 1::2, 0::2] = -2 * g.real
    Om[:, 1::2, 1::2] = -2 * g.imag
    return Om


@dataclass
class ChartForm:
    """A circle-invariant symplectic form with moment map on a chart.

    ``darboux`` names the equivariant Darboux chart F on {Phi < darboux_cap}:
    ``"identity"`` when omega is exactly standard there, ``"radial"`` for
    U(m)-invariant forms, where F(z) = z sqrt(Phi(z) / (pi |z|^2)).
    """

    name: str
    m: int
    omega: Callable[[Array], Array]
    Phi: Callable[[Array], Array]
    cap: float = math.inf
    darboux: str = "identity"
    darboux_cap: float = math.inf
    grad_Phi: Optional[Callable[[Array], Array]] = None
    hess_Phi: Optional[Callable[[Array], Array]] = None
    density: Optional[Callable[[Array], Array]] = None
    params: dict = field(default_factory=dict)
    fd_step: float = 1e-5
    # Moser time step that keeps the pullback residual below 1e-4 on the default region
    moser_step: float = 0.25

    def __post_init__(self):
        if self.darboux not in ("identity", "radial"):
            raise ValueError(f"unknown Darboux chart kind {self.darboux!r}")

    @property
    def dim(self) -> int:
        return 2 * self.m

    def phi(self, x: Array) -> Array:
        return self.Phi(np.atleast_2d(x))

    def grad(self, x: Array) -> Array:
        x = np.atleast_2d(x)
        if self.grad_Phi is not None:
            return self.grad_Phi(x)
        return _fd_grad(self.Phi, x, self.fd_step)

    def hess(self, x: Array) -> Array:
        x = np.atleast_2d(x)
        if self.hess_Phi is not None:
            return self.hess_Phi(x)
        return _fd_jac(self.grad, x, self.fd_step)

    def in_domain(self, x: Array) -> Array:
        return self.phi(x) < self.cap

    def darboux_map(self, x: Array):
        """F and DF on the Darboux region, batched."""
        x = np.atleast_2d(x)
        N, d = x.shape
        if self.darboux == "identity":
            return x.copy(), np.broadcast_to(np.eye(d), (N, d, d)).copy()
        s = np.sum(x * x, axis=1)
        Phi = self.phi(x)
        G = self.grad(x)
        tiny = s < 1e-14
        safe_s = np.where(tiny, 1.0, s)
        rho = np.where(tiny, 1.0, np.sqrt(np.maximum(Phi, 0.0) / (math.pi * safe_s)))
        # grad rho from rho^2 = Phi / (pi s)
        grad_rho = (G * safe_s[:, None] - 2 * Phi[:, None] * x) / (2 * rho[:, None] * math.pi * safe_s[:, None] ** 2)
        grad_rho[tiny] = 0.0
        F = x * rho[:, None]
        DF = rho[:, None, None] * np.eye(d)[None] + x[:, :, None] * grad_rho[:, None, :]
        return F, DF


def _fd_grad(f, x, h):
    N, d = x.shape
    pts = np.concatenate([x + h * e for e in np.eye(d)] + [x - h * e for e in np.eye(d)])
    vals = f(pts).reshape(2, d, N)
    return ((vals[0] - vals[1]) / (2 * h)).T


def _fd_jac(f, x, h):
    """Jacobian (N, out, d) of a batched vector field by central differences."""
    N, d = x.shape
    pts = np.concatenate([x + h * e for e in np.eye(d)] + [x - h * e for e in np.eye(d)])
    vals = f(pts)
    vals = vals.reshape(2, d, N, -1)
    return np.transpose((vals[0] - vals[1]) / (2 * h), (1, 2, 0))


# --- built-in forms -------------------------------------------------------------

def standard_form(m: int = 1) -> ChartForm:
    J = standard_matrix(m)
    return ChartForm(
        name="standard",
        m=m,
        omega=lambda x: np.broadcast_to(J, (len(x), 2 * m, 2 * m)).copy(),
        Phi=lambda x: math.pi * np.sum(x * x, axis=1),
        grad_Phi=lambda x: 2 * math.pi * x,
        hess_Phi=lambda x: np.broadcast_to(2 * math.pi * np.eye(2 * m), (len(x), 2 * m, 2 * m)).copy(),
        density=lambda s: np.ones_like(s),
    )


def _unitary_form(name, m, dK, d2K, cap, darboux_cap, params, density=None) -> ChartForm:
    """U(m)-invariant Kaehler form i d dbar K(|z|^2), given K' and K''.

    Moment map Phi = 2 pi s K'(s) for the diagonal circle.
    """

    def omega(x):
        z = x[:, 0::2] + 1j * x[:, 1::2]
        s = np.sum(x * x, axis=1)
        g = dK(s)[:, None, None] * np.eye(m)[None] + d2K(s)[:, None, None] * np.conj(z)[:, :, None] * z[:, None, :]
        return _hermitian_to_real(g)

    def Phi(x):
        s = np.sum(x * x, axis=1)
        return 2 * math.pi * s * dK(s)

    def grad_Phi(x):
        s = np.sum(x * x, axis=1)
        return (2 * math.pi * (dK(s) + s * d2K(s)) * 2)[:, None] * x

    return ChartForm(name=name, m=m, omega=omega, Phi=Phi, grad_Phi=grad_Phi, cap=cap,
                     darboux="radial", darboux_cap=darboux_cap, params=params, density=density)


def cp_form(m: int = 1) -> ChartForm:
    """Affine chart of CP^m (Fubini-Study, line area 1), rescaled so that
    omega(0) is standard: Phi = pi s / (1 + pi s), capacity 1."""
    dK = lambda s: 0.5 / (1 + math.pi * s)
    d2K = lambda s: -0.5 * math.pi / (1 + math.pi * s) ** 2
    density = (lambda s: 1.0 / (1 + math.pi * s) ** 2) if m == 1 else None
    cf = _unitary_form(f"cp{m}", m, dK, d2K, cap=1.0, darboux_cap=1.0, params={}, density=density)

    def hess(x):
        s = np.sum(x * x, axis=1)
        a = 2 * math.pi / (1 + math.pi * s) ** 2
        da = -4 * math.pi ** 2 / (1 + math.pi * s) ** 3
        return a[:, None, None] * np.eye(2 * m)[None] + 2 * da[:, None, None] * x[:, :, None] * x[:, None, :]

    cf.hess_Phi = hess
    return cf


def radial_gauss_form(amp: float = 0.3, width: float = 1.0) -> ChartForm:
    """Area density proportional to 1 + amp exp(-r^2/width) on R^2.

    Coordinates are rescaled by sqrt(1 + amp) so that omega(0) is standard;
    in them the density is g(s) = f(s/f0)/f0 with f0 = 1 + amp.
    """
    if amp <= -1 or width <= 0:
        raise ValueError("need amp > -1 and width > 0")
    f0 = 1 + amp

    def g(s):
        return (1 + amp * np.exp(-s / (f0 * width))) / f0

    def dK(s):
        u = s / f0
        # Phi = pi (u + amp w (1 - e^{-u/w})) = 2 pi s K'(s)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = np.where(s > 1e-12, (u + amp * width * -np.expm1(-u / width)) / (2 * np.where(s > 1e-12, s, 1.0)), 0.5)
        return val

    def d2K(s):
        # (s K')' = g / 2  =>  K'' = (g/2 - K') / s
        with np.errstate(invalid="ignore", divide="ignore"):
            safe = np.where(s > 1e-8, s, 1.0)
            val = (0.5 * g(s) - dK(s)) / safe
            small = -amp / (4 * f0 * f0 * width)
        return np.where(s > 1e-8, val, small)

    cf = _unitary_form(f"radial:gauss:{amp:g}:{width:g}", 1, dK, d2K, cap=math.inf, darboux_cap=math.inf,
                       params={"amp": amp, "width": width}, density=g)
    cf.grad_Phi = lambda x: (2 * math.pi * g(np.sum(x * x, axis=1)))[:, None] * x
    return cf


def _smoothstep(s, a, b):
    """C-infinity step: 0 for s <= a, 1 for s >= b, with its derivative."""
    def psi(u):
        return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)

    def dpsi(u):
        safe = np.where(u > 0, u, 1.0)
        return np.where(u > 0, np.exp(-1.0 / safe) / safe ** 2, 0.0)

    u = (s - a) / (b - a)
    p, q = psi(u), psi(1 - u)
    val = p / (p + q)
    dval = (dpsi(u) * q + p * dpsi(1 - u)) / (p + q) ** 2 / (b - a)
    return val, dval


def twist_form(eps: float = 0.3, s0: float = 0.25, s1: float = 2.25) -> ChartForm:
    """omega_std + eps d(phi(|z|^2) Re(zbar_1 dz_2)) on C^2.

    Invariant under the diagonal circle but not under U(2).  It is exactly
    standard on |z|^2 < s0, where phi = step(s) exp(-s) vanishes.
    """
    m = 2
    J = standard_matrix(m)

    def phi(s):
        step, dstep = _smoothstep(s, s0, s1)
        e = np.exp(-s)
        return step * e, (dstep - step) * e

    def omega(x):
        s = np.sum(x * x, axis=1)
        ph, dph = phi(s)
        x1, y1 = x[:, 0], x[:, 1]
        nu = np.zeros_like(x)
        nu[:, 2], nu[:, 3] = x1, y1
        ds = 2 * x
        wedge = ds[:, :, None] * nu[:, None, :] - nu[:, :, None] * ds[:, None, :]
        dnu = np.zeros((2 * m, 2 * m))
        dnu[0, 2], dnu[2, 0], dnu[1, 3], dnu[3, 1] = 1, -1, 1, -1
        return J[None] + eps * (dph[:, None, None] * wedge + ph[:, None, None] * dnu[None])

    def Phi(x):
        s = np.sum(x * x, axis=1)
        ph, _ = phi(s)
        q = x[:, 2] * x[:, 1] - x[:, 0] * x[:, 3]
        return math.pi * s + eps * ph * 2 * math.pi * q

    def grad_Phi(x):
        s = np.sum(x * x, axis=1)
        ph, dph = phi(s)
        q = x[:, 2] * x[:, 1] - x[:, 0] * x[:, 3]
        gq = np.stack([-x[:, 3], x[:, 2], x[:, 1], -x[:, 0]], axis=1)
        return 2 * math.pi * x + 2 * math.pi * eps * (dph[:, None] * 2 * x * q[:, None] + ph[:, None] * gq)

    return ChartForm(name=f"twist:{eps:g}", m=m, omega=omega, Phi=Phi, grad_Phi=grad_Phi,
                     darboux="identity", darboux_cap=math.pi * s0, params={"eps": eps, "s0": s0, "s1": s1},
                     moser_step=0.125)


def builtin_form(name: str) -> ChartForm:
    """Resolve ``standard``, ``standard2``, ``cp1``, ``cp2``,
    ``radial:gauss:<amp>[:<width>]`` (also ``radial:<amp>``) and ``twist[:<eps>]``."""
    parts = name.split(":")
    head = parts[0]
    try:
        if name == "standard":
            return standard_form(1)
        if name == "standard2":
            return standard_form(2)
        if name == "cp1":
            return cp_form(1)
        if name == "cp2":
            return cp_form(2)
        if head == "radial":
            rest = parts[1:]
            if rest and rest[0] == "gauss":
                rest = rest[1:]
            amp = float(rest[0]) if rest else 0.3
            width = float(rest[1]) if len(rest) > 1 else 1.0
            return radial_gauss_form(amp, width)
        if head == "twist":
            return twist_form(float(parts[1]) if len(parts) > 1 else 0.3)
    except (ValueError, IndexError) as exc:
        raise KeyError(f"bad form specification {name!r}: {exc}") from exc
    raise KeyError(f"unknown form {name!r}")
