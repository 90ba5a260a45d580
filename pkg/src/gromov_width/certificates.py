"""Certified lower and upper bounds for Gromov width.

Lower bounds come from a Hamiltonian circle action with a fixed point whose
isotropy weights are all one, on a manifold with integral symplectic form:
then B(1) embeds.  Upper bounds come from a nonzero Gromov-Witten invariant
<[pt], [X], [Y]>_A in an indecomposable class A of a monotone manifold:
then B(a) does not embed for a > omega(A).

Bounds are ``Fraction`` values; ``None`` means the hypotheses gave no
conclusion and serializes as ``"none"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .grassmannian import CircleActionSpec, FixedPointLabel, isotropy_weights
from .schubert import BoxContext, Partition, gw_invariant_3pt

Bound = Optional[Fraction]


@dataclass(frozen=True)
class MonotonicityCheck:
    """omega(B) = lambda_mono * c1(B) on spherical classes, tested on the
    generator A of a rank-one H_2."""

    c1_of_A: int
    omega_of_A: Fraction

    @property
    def lam(self) -> Fraction:
        return Fraction(self.omega_of_A)

    @property
    def monotonicity_constant(self) -> Fraction:
        return Fraction(self.omega_of_A) / self.c1_of_A

    @property
    def passed(self) -> bool:
        return self.c1_of_A > 0 and self.omega_of_A > 0

    def to_json(self) -> dict:
        return {
            "c1_of_A": self.c1_of_A,
            "omega_of_A": _frac(self.omega_of_A),
            "lambda": _frac(self.lam),
            "monotonicity_constant": _frac(self.monotonicity_constant) if self.c1_of_A else "none",
            "passed": self.passed,
        }


@dataclass(frozen=True)
class IndecomposabilityCheck:
    """A is indecomposable when omega(A) is the smallest positive period of
    omega on spherical classes: no sum of two or more positive-area spherical
    classes can then have area omega(A)."""

    omega_of_A: Fraction
    minimal_positive_period: Fraction

    @property
    def passed(self) -> bool:
        return self.minimal_positive_period > 0 and self.omega_of_A == self.minimal_positive_period

    def to_json(self) -> dict:
        return {
            "omega_of_A": _frac(self.omega_of_A),
            "minimal_positive_period": _frac(self.minimal_positive_period),
            "passed": self.passed,
        }


@dataclass
class WidthCertificate:
    lower: Bound
    upper: Bound
    lower_reason: dict = field(default_factory=dict)
    upper_reason: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"inconsistent certificate: lower {self.lower} > upper {self.upper}")

    @property
    def exact(self) -> bool:
        return self.lower is not None and self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": _bound(self.lower),
            "upper": _bound(self.upper),
            "lower_reason": self.lower_reason,
            "upper_reason": self.upper_reason,
        }


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _bound(x: Bound) -> str:
    return "none" if x is None else _frac(x)


def lower_bound_all_weights_one(weights: Sequence[int], form_is_integral: bool) -> Bound:
    """1 if every isotropy weight at the fixed point is 1 and [omega] is
    integral (then B(1) embeds); otherwise no conclusion."""
    weights = list(weights)
    if not weights:
        raise ValueError("empty weight list: not a fixed point of an effective action on a positive-dimensional manifold")
    if form_is_integral and all(w == 1 for w in weights):
        return Fraction(1)
    return None


def dimension_condition(s: int, codims: Sequence[int], real_dim: int, c1_of_A: int) -> bool:
    """sum of codimensions == real_dim + 2 c1(A) + 2s - 6."""
    codims = list(codims)
    if s < 1 or s != len(codims):
        raise ValueError("s must equal the number of constraints and be at least 1")
    return sum(codims) == real_dim + 2 * c1_of_A + 2 * s - 6


def upper_bound_from_invariant(
    lam,
    mono: MonotonicityCheck,
    indec: IndecomposabilityCheck,
    dim_ok: bool,
    invariant_value: int,
) -> Bound:
    """omega(A) when (M, omega) is monotone, A indecomposable, the dimension
    condition holds and <[pt],[X],[Y]>_A != 0; otherwise no conclusion."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("omega(A) must be nonnegative")
    if lam != mono.lam:
        raise ValueError("lambda must equal omega(A) of the monotonicity check")
    if mono.passed and indec.passed and dim_ok and invariant_value != 0:
        return lam
    return None


def grassmannian_width_certificate(ctx: BoxContext) -> WidthCertificate:
    """Lower and upper bound for the Gromov width of Gr(k, n) with [omega]
    the positive generator of H^2(Gr(k,n); Z)."""
    k, n = ctx.k, ctx.n

    act = CircleActionSpec.standard(ctx)
    fixed = FixedPointLabel.base(ctx)
    weights = isotropy_weights(fixed, act)
    # omega generates integral cohomology by normalization
    lower = lower_bound_all_weights_one(weights, form_is_integral=True)
    lower_reason = {
        "fixed_point": list(fixed.S),
        "circle_weights": list(act.m),
        "isotropy_weights": weights,
        "all_weights_one": all(w == 1 for w in weights),
        "form_is_integral": True,
    }

    point, hyper, through = ctx.point_class(), Partition([1] * k), Partition([n - k])
    d = 1
    value = gw_invariant_3pt(point, hyper, through, d, ctx)
    c1 = n
    codims = [2 * point.size, 2 * hyper.size, 2 * through.size]
    dim_ok = dimension_condition(3, codims, ctx.real_dim, c1)
    # X = planes in a hyperplane ~ Gr(k, n-1); Y = planes through a line ~ Gr(k-1, n-1)
    dim_X, dim_Y = ctx.real_dim - codims[1], ctx.real_dim - codims[2]
    mono = MonotonicityCheck(c1_of_A=c1, omega_of_A=Fraction(1))
    # H_2 = Z A with omega(A) = 1: every positive period is an integer >= 1
    indec = IndecomposabilityCheck(omega_of_A=Fraction(1), minimal_positive_period=Fraction(1))
    upper = upper_bound_from_invariant(mono.lam, mono, indec, dim_ok, value)
    upper_reason = {
        "classes": {"point": list(point), "X": list(hyper), "Y": list(through)},
        "degree": d,
        "invariant_value": value,
        "codimensions": codims,
        "dimension_condition": dim_ok,
        "dim_X_plus_dim_Y": dim_X + dim_Y,
        "dim_X_plus_dim_Y_expected": 2 * ctx.real_dim - 2 * c1,
        "monotonicity": mono.to_json(),
        "indecomposability": indec.to_json(),
    }
    return WidthCertificate(lower, upper, lower_reason, upper_reason)


def certificate_checks(cert: WidthCertificate) -> List[dict]:
    """Flat list of named hypotheses, suitable for a report."""
    lo, up = cert.lower_reason, cert.upper_reason
    return [
        {"name": "isotropy_weights_all_one", "pass": bool(lo.get("all_weights_one")), "value": lo.get("isotropy_weights")},
        {"name": "form_is_integral", "pass": bool(lo.get("form_is_integral")), "value": lo.get("form_is_integral")},
        {"name": "gw_invariant_nonzero", "pass": up.get("invariant_value", 0) != 0, "value": up.get("invariant_value")},
        {"name": "dimension_condition", "pass": bool(up.get("dimension_condition")), "value": up.get("codimensions")},
        {"name": "submanifold_dimensions", "pass": up.get("dim_X_plus_dim_Y") == up.get("dim_X_plus_dim_Y_expected"),
         "value": up.get("dim_X_plus_dim_Y")},
        {"name": "monotone", "pass": bool(up.get("monotonicity", {}).get("passed")), "value": up.get("monotonicity", {}).get("lambda")},
        {"name": "indecomposable", "pass": bool(up.get("indecomposability", {}).get("passed")),
         "value": up.get("indecomposability", {}).get("minimal_positive_period")},
    ]
