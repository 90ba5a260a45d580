import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gromov_width.grassmannian import (
    DARBOUX_SCALE,
    CircleActionSpec,
    FixedPointLabel,
    GraphChartPoint,
    act_on_point,
    closedness_residual,
    isotropy_weights,
    line_area,
    moment_map_circle,
    symplectic_form_at,
    verify_moment_equation,
)
from gromov_width.schubert import BoxContext

from oracles import form_from_potential

CONTEXTS = [(1, 2), (1, 3), (2, 4), (2, 5)]


def random_point(ctx, rng, radius=1.0):
    shape = (ctx.n - ctx.k, ctx.k)
    r = radius * np.sqrt(rng.uniform(0, 1, shape))
    return GraphChartPoint(ctx, r * np.exp(2j * np.pi * rng.uniform(0, 1, shape)))


# --- the form --------------------------------------------------------------------

def test_cp1_form_at_origin():
    Omega = symplectic_form_at(GraphChartPoint.origin(BoxContext(1, 2)))
    np.testing.assert_allclose(Omega, [[0, 1 / np.pi], [-1 / np.pi, 0]], atol=1e-15)


@pytest.mark.parametrize("k, n", CONTEXTS + [(3, 6)])
def test_form_at_origin_is_scaled_standard(k, n):
    ctx = BoxContext(k, n)
    m = k * (n - k)
    std = np.kron(np.eye(m), [[0, 1], [-1, 0]])
    np.testing.assert_allclose(symplectic_form_at(GraphChartPoint.origin(ctx)), std / np.pi, atol=1e-15)


@pytest.mark.parametrize("k, n", CONTEXTS)
def test_form_matches_potential_second_differences(k, n):
    ctx = BoxContext(k, n)
    rng = np.random.default_rng(11)
    for _ in range(5):
        pt = random_point(ctx, rng, 1.5)
        oracle = form_from_potential(pt.coords(), k, n, h=1e-4)
        np.testing.assert_allclose(symplectic_form_at(pt), oracle, atol=2e-6)


@pytest.mark.parametrize("k, n", CONTEXTS)
def test_form_is_antisymmetric_and_nondegenerate(k, n):
    ctx = BoxContext(k, n)
    rng = np.random.default_rng(3)
    for _ in range(20):
        Omega = symplectic_form_at(random_point(ctx, rng, 3.0))
        np.testing.assert_allclose(Omega, -Omega.T, atol=1e-15)
        assert abs(np.linalg.det(Omega)) > 0
        # omega(v, Jv) > 0: the form tames multiplication by i
        J = np.kron(np.eye(Omega.shape[0] // 2), [[0, -1], [1, 0]])
        v = rng.normal(size=Omega.shape[0])
        assert v @ Omega @ (J @ v) > 0


@pytest.mark.parametrize("k, n", [(1, 2), (1, 3), (2, 4)])
def test_form_is_closed(k, n):
    ctx = BoxContext(k, n)
    rng = np.random.default_rng(5)
    worst = max(closedness_residual(random_point(ctx, rng, 1.2), h=1e-4) for _ in range(20))
    assert worst <= 1e-5


def test_cp1_total_area_by_radial_integration():
    from scipy import integrate
    val, _ = integrate.quad(lambda r: 2 * np.pi * r / (np.pi * (1 + r * r) ** 2), 0, np.inf, epsabs=1e-13)
    assert abs(val - 1) < 1e-8
    Omega = symplectic_form_at(GraphChartPoint(BoxContext(1, 2), np.array([[0.7 + 0.2j]])))
    r2 = 0.7 ** 2 + 0.2 ** 2
    assert Omega[0, 1] == pytest.approx(1 / (np.pi * (1 + r2) ** 2), rel=1e-13)


@pytest.mark.parametrize("k, n", [(1, 2), (2, 4)])
def test_line_area_is_one(k, n):
    assert abs(line_area(BoxContext(k, n)) - 1) <= 1e-6


# --- moment map ---------------------------------------------------------------------

def test_cp1_moment_map_closed_form():
    ctx = BoxContext(1, 2)
    act = CircleActionSpec.standard(ctx)
    assert moment_map_circle(GraphChartPoint.origin(ctx), act) == 0
    assert moment_map_circle(GraphChartPoint(ctx, np.array([[np.exp(0.3j)]])), act) == pytest.approx(0.5, abs=1e-15)
    for r in [0.1, 2.0, 30.0, 1e4]:
        val = moment_map_circle(GraphChartPoint(ctx, np.array([[r + 0j]])), act)
        assert 0 <= val < 1
        assert val == pytest.approx(r * r / (1 + r * r), rel=1e-13)


def test_moment_map_quadratic_term_in_darboux_coordinates():
    ctx = BoxContext(2, 4)
    act = CircleActionSpec.standard(ctx)
    rng = np.random.default_rng(8)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    for eps in [1e-2, 1e-3]:
        pt = GraphChartPoint(ctx, eps * DARBOUX_SCALE * z)
        quad = np.pi * np.sum(np.abs(eps * z) ** 2)
        # the correction is quartic, so the relative error is of the order of Phi itself
        assert abs(moment_map_circle(pt, act) / quad - 1) < 2 * quad


def test_moment_equation_cp1_example():
    ctx = BoxContext(1, 2)
    pt = GraphChartPoint(ctx, np.array([[0.3 + 0.4j]]))
    assert verify_moment_equation(pt, CircleActionSpec.standard(ctx), h=1e-4) <= 1e-6


@pytest.mark.parametrize("k, n", [(1, 2), (1, 3), (2, 4)])
def test_moment_equation_at_origin_vanishes(k, n):
    ctx = BoxContext(k, n)
    for h in [1e-2, 1e-4]:
        assert verify_moment_equation(GraphChartPoint.origin(ctx), CircleActionSpec.standard(ctx), h) <= 1e-14


@pytest.mark.parametrize("k, n", [(1, 3), (2, 4), (2, 5)])
def test_moment_equation_for_random_weights(k, n):
    ctx = BoxContext(k, n)
    rng = np.random.default_rng(k * 10 + n)
    for _ in range(10):
        act = CircleActionSpec(ctx, tuple(rng.integers(-2, 3, size=n)))
        assert verify_moment_equation(random_point(ctx, rng), act, h=1e-4) <= 1e-5


def test_moment_equation_residual_is_second_order():
    ctx = BoxContext(2, 4)
    pt = random_point(ctx, np.random.default_rng(1))
    act = CircleActionSpec.standard(ctx)
    coarse = verify_moment_equation(pt, act, 1e-2)
    fine = verify_moment_equation(pt, act, 1e-3)
    assert fine < coarse / 50


def test_moment_map_is_invariant_under_the_action():
    ctx = BoxContext(2, 5)
    act = CircleActionSpec(ctx, (0, 1, 0, 2, 1))
    pt = random_point(ctx, np.random.default_rng(2))
    base = moment_map_circle(pt, act)
    for theta in [0.1, 0.37, 0.5]:
        assert moment_map_circle(act_on_point(pt, act, theta), act) == pytest.approx(base, rel=1e-12)


# --- isotropy weights -----------------------------------------------------------------

def linearized_weights(S, m, ctx):
    """Rotation numbers of the action on the chart centered at the plane V_S,
    read off numerically from small tangent vectors."""
    order = list(S) + [j for j in range(1, ctx.n + 1) if j not in S]
    act = CircleActionSpec(ctx, tuple(m[i - 1] for i in order))
    out = []
    theta, eps = 1e-3, 1e-6
    for row in range(ctx.n - ctx.k):
        for col in range(ctx.k):
            B = np.zeros((ctx.n - ctx.k, ctx.k), dtype=complex)
            B[row, col] = eps
            moved = act_on_point(GraphChartPoint(ctx, B), act, theta).B[row, col]
            out.append(int(round(np.angle(moved / eps) / (2 * np.pi * theta))))
    return sorted(out)


@pytest.mark.parametrize("k, n", [(k, n) for n in range(2, 7) for k in range(1, n)])
def test_base_point_weights_are_all_one(k, n):
    ctx = BoxContext(k, n)
    assert isotropy_weights(FixedPointLabel.base(ctx), CircleActionSpec.standard(ctx)) == [1] * (k * (n - k))


def test_off_base_example():
    ctx = BoxContext(2, 4)
    act = CircleActionSpec(ctx, (0, 0, 1, 1))
    got = isotropy_weights(FixedPointLabel((1, 3)), act)
    assert got == [-1, 0, 0, 1]
    assert got == linearized_weights((1, 3), (0, 0, 1, 1), ctx)


def test_cp1_opposite_point():
    ctx = BoxContext(1, 2)
    assert isotropy_weights(FixedPointLabel((2,)), CircleActionSpec(ctx, (0, 1))) == [-1]


def test_rejects_wrong_size_subset():
    ctx = BoxContext(2, 4)
    with pytest.raises(ValueError):
        isotropy_weights(FixedPointLabel((1,)), CircleActionSpec.standard(ctx))


@st.composite
def fixed_point_data(draw):
    n = draw(st.integers(2, 7))
    k = draw(st.integers(1, n - 1))
    S = draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))
    m = draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    return BoxContext(k, n), tuple(S), tuple(m)


@settings(max_examples=100, deadline=None)
@given(fixed_point_data())
def test_weight_count_and_sum(data):
    ctx, S, m = data
    w = isotropy_weights(FixedPointLabel(S), CircleActionSpec(ctx, m))
    assert len(w) == ctx.k * (ctx.n - ctx.k)
    out = sum(m[j - 1] for j in range(1, ctx.n + 1) if j not in S)
    ins = sum(m[i - 1] for i in S)
    assert sum(w) == ctx.k * out - (ctx.n - ctx.k) * ins


@settings(max_examples=30, deadline=None)
@given(fixed_point_data())
def test_weights_match_linearized_action(data):
    ctx, S, m = data
    assert isotropy_weights(FixedPointLabel(S), CircleActionSpec(ctx, m)) == linearized_weights(S, m, ctx)


# --- serialization ---------------------------------------------------------------------

def test_chart_point_json_roundtrip():
    ctx = BoxContext(2, 5)
    pt = random_point(ctx, np.random.default_rng(4))
    data = json.loads(json.dumps(pt.to_json()))
    assert set(data) == {"k", "n", "B_re", "B_im"}
    back = GraphChartPoint.from_json(data)
    assert back.ctx == ctx and np.array_equal(back.B, pt.B)


def test_coords_roundtrip_and_shape_check():
    ctx = BoxContext(2, 4)
    pt = random_point(ctx, np.random.default_rng(6))
    assert np.array_equal(GraphChartPoint.from_coords(ctx, pt.coords()).B, pt.B)
    with pytest.raises(ValueError):
        GraphChartPoint(ctx, np.zeros((1, 2)))
