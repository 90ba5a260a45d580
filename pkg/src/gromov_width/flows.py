"""Fixed-grid classical Runge-Kutta with the variational equation.

Step grids are deterministic functions of the duration alone, so a batch of
points always sees the same steps and results are reproducible bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepGrid:
    """Steps grow geometrically from ``first`` by ``growth`` and are capped
    at ``largest``; the sequence is rescaled to hit the duration exactly.

    Flows contracting towards a fixed point are stiffest at the start, which
    is where the small steps are.
    """

    largest: float = 0.1
    first: float = 2e-3
    growth: float = 1.25

    def __post_init__(self):
        if not (0 < self.first <= self.largest) or self.growth < 1:
            raise ValueError("need 0 < first <= largest and growth >= 1")

    def steps(self, duration: float) -> np.ndarray:
        T = abs(duration)
        if T == 0:
            return np.zeros(0)
        out, total, h = [], 0.0, self.first
        while total < T * (1 - 1e-12):
            out.append(h)
            total += h
            h = min(h * self.growth, self.largest)
        steps = np.asarray(out) * (T / total)
        return math.copysign(1.0, duration) * steps

    def halved(self) -> "StepGrid":
        return StepGrid(self.largest / 2, self.first / 2, math.sqrt(self.growth))


def rk4_variational(field, t0: float, y: np.ndarray, J: np.ndarray, steps, with_jacobian: bool = True,
                    exact=None):
    """Integrate y' = f(t, y) and J' = Df(t, y) J over the given signed steps.

    ``field(t, y, want_jac)`` returns (f, Df), Df of shape (N, d, d) or None.
    ``exact(y, J, h)``, when given, returns (y_h, J_h, mask): closed-form
    steps that replace the Runge-Kutta update on the masked points.
    """
    t = t0
    for h in steps:
        y_start, J_start = y, J
        if with_jacobian:
            k1, K1 = field(t, y, True)
            k2, K2 = field(t + h / 2, y + h / 2 * k1, True)
            Jm1 = J + h / 2 * np.einsum("nab,nbc->nac", K1, J)
            K2 = np.einsum("nab,nbc->nac", K2, Jm1)
            k3, K3 = field(t + h / 2, y + h / 2 * k2, True)
            Jm2 = J + h / 2 * K2
            K3 = np.einsum("nab,nbc->nac", K3, Jm2)
            k4, K4 = field(t + h, y + h * k3, True)
            K4 = np.einsum("nab,nbc->nac", K4, J + h * K3)
            K1 = np.einsum("nab,nbc->nac", K1, J)
            J = J + h / 6 * (K1 + 2 * K2 + 2 * K3 + K4)
        else:
            k1, _ = field(t, y, False)
            k2, _ = field(t + h / 2, y + h / 2 * k1, False)
            k3, _ = field(t + h / 2, y + h / 2 * k2, False)
            k4, _ = field(t + h, y + h * k3, False)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if exact is not None:
            y_e, J_e, mask = exact(y_start, J_start, h)
            if mask.any():
                y = np.where(mask[:, None], y_e, y)
                if with_jacobian:
                    J = np.where(mask[:, None, None], J_e, J)
        t += h
    return y, J
