"""Command-line front end.

    gromov-width width 2 4
    gromov-width gw 2 4 --a 2,2 --b 1,1 --c 2 --d 1
    gromov-width qh 2 4 --a 1 --b 2,1
    gromov-width toric square.json --alpha 0,0
    gromov-width moser cp1 --t-final 3 --samples 100
    gromov-width selftest

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .certificates import certificate_checks, grassmannian_width_certificate
from .chart_forms import builtin_form
from .grassmannian import CircleActionSpec, GraphChartPoint, line_area, verify_moment_equation
from .moser import (MoserError, construct_embedding, equivariance_residual, psi_flow,
                    pullback_from_jacobian, pullback_residual, sample_region)
from .report import Report
from .schubert import (BoxContext, BoxError, Partition, degree_condition, gw_invariant_3pt,
                       parse_partition, quantum_product)
from .toric import (DelzantPolytope, PolytopeError, box, centered_region, simplex,
                    toric_lower_bound, validate_delzant, vertex_capacities)

MAX_N = 8


class UsageError(Exception):
    def __init__(self, message: str, report: Optional[Report] = None):
        super().__init__(message)
        self.report = report


def _context(k: int, n: int) -> BoxContext:
    if not 0 < k < n <= MAX_N:
        raise UsageError(f"need 0 < k < n <= {MAX_N}, got k={k}, n={n}")
    return BoxContext(k, n)


def _partition(text: str, ctx: BoxContext) -> Partition:
    try:
        return ctx.check(parse_partition(text))
    except (BoxError, ValueError) as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from exc


# --- commands -----------------------------------------------------------------

def cmd_width(k: int, n: int) -> Report:
    ctx = _context(k, n)
    cert = grassmannian_width_certificate(ctx)
    rep = Report("width", {"k": k, "n": n})
    rep.results = {"lower": cert.to_json()["lower"], "upper": cert.to_json()["upper"], "certificate": cert.to_json()}
    rep.checks.extend(certificate_checks(cert))
    one = Fraction(1)
    rep.check("width_equals_one", cert.lower == one and cert.upper == one, rep.results["lower"])
    return rep


def cmd_gw(k: int, n: int, a: str, b: str, c: str, d: int) -> Report:
    ctx = _context(k, n)
    lam, mu, nu = (_partition(p, ctx) for p in (a, b, c))
    if d < 0:
        raise UsageError("degree must be nonnegative")
    value = gw_invariant_3pt(lam, mu, nu, d, ctx)
    ok = degree_condition(lam, mu, nu, d, ctx)
    rep = Report("gw", {"k": k, "n": n, "a": list(lam), "b": list(mu), "c": list(nu), "d": d})
    rep.results = {"invariant": value}
    rep.check("degree_condition", ok, {"total": lam.size + mu.size + nu.size,
                                       "required": ctx.complex_dim + d * n})
    return rep


def cmd_qh(k: int, n: int, a: str, b: str) -> Report:
    ctx = _context(k, n)
    lam, mu = _partition(a, ctx), _partition(b, ctx)
    prod = quantum_product(lam, mu, ctx)
    rep = Report("qh", {"k": k, "n": n, "a": list(lam), "b": list(mu)})
    rep.results = {"product": prod.to_json()}
    terms = prod.sorted_terms()
    rep.check("nonnegative_coefficients", all(c > 0 for _, _, c in terms), len(terms))
    rep.check("graded", all(p.size + n * dd == lam.size + mu.size for p, dd, _ in terms), lam.size + mu.size)
    return rep


def _read_polytope(path: str) -> DelzantPolytope:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return DelzantPolytope.from_json(data)
    except (PolytopeError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _fractions(text: str) -> List[Fraction]:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational vector {text!r}") from exc


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_toric(path: str, alpha: Optional[str] = None) -> Report:
    P = _read_polytope(path)
    rep = Report("toric", {"file": path, "alpha": alpha})
    try:
        check = validate_delzant(P)
    except PolytopeError as exc:
        rep.check("delzant", False, [str(exc)] + exc.diagnostics)
        raise UsageError(str(exc), rep) from exc
    rep.check("delzant", bool(check), check.diagnostics or None)
    if not check:
        rep.results = {"invalid_vertex": None if check.vertex is None else [_fstr(v) for v in check.vertex]}
        raise UsageError("; ".join(check.diagnostics), rep)
    rep.results = {
        "polytope": P.to_json(),
        "vertices": [{"vertex": [_fstr(x) for x in v.vertex],
                      "weights": [list(w) for w in v.weights],
                      "capacity": _fstr(cap)} for v, cap in vertex_capacities(P)],
        "lower_bound": _fstr(toric_lower_bound(P)),
    }
    if alpha is not None:
        try:
            region = centered_region(P, _fractions(alpha))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rep.results["centered_region"] = {
            "faces": [list(f) for f in region.faces],
            "excluded_facets": list(region.excluded_facets),
        }
    return rep


def _default_phi_max(fmap, t_final: float) -> float:
    return 0.9 * min(fmap.region_bound(t_final), 10.0)


def cmd_moser(form: str, t_final: float, samples: int, seed: int, tolerance: float,
              phi_max: Optional[float] = None, timings: bool = False) -> Report:
    try:
        cf = builtin_form(form)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    if not (math.isfinite(t_final) and t_final >= 0):
        raise UsageError("--t-final must be a nonnegative number")
    if samples < 1:
        raise UsageError("--samples must be positive")
    fmap = construct_embedding(cf, t_final)
    if phi_max is None:
        phi_max = _default_phi_max(fmap, t_final)
    if not 0 < phi_max < fmap.region_bound(t_final):
        raise UsageError(f"--phi-max must lie in (0, {fmap.region_bound(t_final):.6g})")

    rng = np.random.default_rng(seed)
    clock = {}
    start = time.perf_counter()
    X = sample_region(cf, samples, phi_max, rng)
    clock["sampling"] = time.perf_counter() - start
    rep = Report("moser", {"form": form, "t_final": t_final, "samples": samples, "seed": seed,
                           "phi_max": phi_max, "tolerance": tolerance})
    try:
        start = time.perf_counter()
        st = fmap.stages(t_final, X)
        clock["construction"] = time.perf_counter() - start
        start = time.perf_counter()
        psi, _ = psi_flow(cf, X, t_final, fmap.grid, with_jacobian=False)
        scaling = float(np.max(np.abs(cf.phi(psi) - math.exp(-t_final) * cf.phi(X))))
        pull = pullback_from_jacobian(st["jacobian"], cf, X)
        equi = equivariance_residual(fmap, X[: min(len(X), 10)])
        clock["verification"] = time.perf_counter() - start
    except MoserError as exc:
        rep.results = {"error": {"stage": exc.stage, "message": str(exc)}}
        rep.check("construction", False, exc.stage)
        return rep
    moment = float(np.max(np.abs(math.pi * np.sum(st["image"] ** 2, axis=1) - cf.phi(X))))
    rep.results = {
        "parameters": {"form": cf.name, "m": cf.m, "form_params": cf.params, "grid": fmap.grid.to_json(),
                       "region_bound": fmap.region_bound(t_final)},
        "residuals": {"pullback": pull, "equivariance": equi, "scaling_law": scaling,
                      "moment_intertwining": moment,
                      "max_displacement_G": float(np.max(np.abs(st["G"] - X)))},
    }
    if timings:
        rep.results["stage_timings"] = clock
    rep.check("pullback", pull <= tolerance, pull)
    rep.check("equivariance", equi <= tolerance, equi)
    rep.check("moment_intertwining", moment <= tolerance, moment)
    return rep


def cmd_selftest(seed: int, tolerance: float) -> Report:
    rep = Report("selftest", {"seed": seed, "tolerance": tolerance})
    one = Fraction(1)
    widths = []
    for n in range(2, MAX_N + 1):
        for k in range(1, n):
            cert = grassmannian_width_certificate(BoxContext(k, n))
            widths.append(cert.lower == one and cert.upper == one)
    rep.check("grassmannian_width_is_one", all(widths), sum(widths))

    pts = []
    for n in range(2, MAX_N + 1):
        for k in range(1, n):
            ctx = BoxContext(k, n)
            pts.append(gw_invariant_3pt(ctx.point_class(), [1] * k, [n - k], 1, ctx))
    rep.check("point_line_invariant_is_one", all(v == 1 for v in pts), sorted(set(pts)))

    assoc = True
    for ctx in (BoxContext(2, 4), BoxContext(2, 5)):
        gens = [Partition([r]) for r in range(1, ctx.cols + 1)] + [Partition([1] * c) for c in range(2, ctx.k + 1)]
        sig = {g: quantum_product(g, [], ctx) for g in gens}
        for a in gens:
            for b in gens:
                for c in gens:
                    assoc &= (sig[a] * sig[b]) * sig[c] == sig[a] * (sig[b] * sig[c])
    rep.check("quantum_associativity", assoc)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for k, n in ((1, 2), (1, 3), (2, 4)):
        ctx = BoxContext(k, n)
        act = CircleActionSpec(ctx, tuple(int(w) for w in rng.integers(-2, 3, size=n)))
        for _ in range(5):
            pt = GraphChartPoint.from_coords(ctx, rng.normal(size=2 * k * (n - k)) * 0.7)
            worst = max(worst, verify_moment_equation(pt, act, 1e-4))
    rep.check("moment_equation", worst <= 1e-5, worst)
    area = line_area(BoxContext(1, 2))
    rep.check("line_area_is_one", abs(area - 1) <= 1e-6, area)

    rep.check("toric_box_bound", toric_lower_bound(box(2, 3)) == 2, "2")
    rep.check("toric_simplex_bound", toric_lower_bound(simplex(2)) == 1, "1")
    tri = DelzantPolytope(2, (((1, 0), 0), ((0, 1), 0), ((-1, -2), -2)))
    rep.check("toric_rejects_non_smooth", not validate_delzant(tri))

    for form, t, pmax in (("standard", 2.0, 1.0), ("cp1", 2.0, 0.9)):
        cf = builtin_form(form)
        fmap = construct_embedding(cf, t)
        X = sample_region(cf, 8, pmax, rng)
        res = pullback_residual(fmap, cf, X)
        rep.check(f"moser_{form}_pullback", res <= tolerance, res)
    return rep


# --- argument parsing --------------------------------------------------------------

def _global_flags(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="emit the JSON report")
    parser.add_argument("--tolerance", type=float, default=default(1e-4), help="numerical tolerance for checks")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for sample points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gromov-width", description="Gromov width certificates and ball embeddings.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("width", parents=[common], help="width certificate for Gr(k,n)")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("gw", parents=[common], help="three-point genus-0 invariant")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", required=True, help="partition, e.g. 2,1 (empty string for [])")
    p.add_argument("--d", type=int, required=True, help="degree")

    p = sub.add_parser("qh", parents=[common], help="quantum product of two Schubert classes")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("toric", parents=[common], help="Delzant validation and ball capacities")
    p.add_argument("polytope_file")
    p.add_argument("--alpha", help="point of the polytope, e.g. 0,1/2")

    p = sub.add_parser("moser", parents=[common], help="construct and verify a ball embedding")
    p.add_argument("form", help="standard, standard2, cp1, cp2, radial:gauss:<amp>[:<width>], twist[:<eps>]")
    p.add_argument("--t-final", type=float, default=3.0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--phi-max", type=float, default=None)
    p.add_argument("--timings", action="store_true", help="include wall-clock stage timings (not reproducible)")

    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return parser


def run(args) -> Report:
    if args.cmd == "width":
        return cmd_width(args.k, args.n)
    if args.cmd == "gw":
        return cmd_gw(args.k, args.n, args.a, args.b, args.c, args.d)
    if args.cmd == "qh":
        return cmd_qh(args.k, args.n, args.a, args.b)
    if args.cmd == "toric":
        return cmd_toric(args.polytope_file, args.alpha)
    if args.cmd == "moser":
        return cmd_moser(args.form, args.t_final, args.samples, args.seed, args.tolerance,
                         args.phi_max, args.timings)
    return cmd_selftest(args.seed, args.tolerance)


def _emit(rep: Report, as_json: bool, stream):
    stream.write(rep.dumps() if as_json else rep.render_text())


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        rep = run(args)
    except UsageError as exc:
        if exc.report is not None:
            _emit(exc.report, args.json, sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(rep, args.json, sys.stdout)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
