import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from c5min.generalp import (
    DegenerateError,
    build_construction,
    construction_report,
    convention_report,
    curve_monotone,
    f_value,
    feasible_set,
    fmin,
    fmin_curve,
    g_value,
    golden_section,
    k2_reduced,
    knots_between,
    lam,
    layout,
    regime_of,
    rho_from,
    secant_L,
    y_degree_concentration,
)
from c5min.smallgraph import count_c5

xs, ys, rs = sp.symbols("x y rho")


def blowup(k):
    """Weights and edge probabilities of the limit object of the construction."""
    w = [xs] * (k - 1) + [ys / 2, ys / 2]
    n = k + 1
    W = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            if i != j:
                W[i, j] = 1
    W[k - 1, k] = W[k, k - 1] = 2 * rs
    return sp.diag(*w), W


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_f_and_g_match_blowup_densities(k):
    D, W = blowup(k)
    DW = D * W
    t_c5 = (DW**5).trace() / 10
    edge = sum(D * W * D)
    f_expr = f_value(k, xs, ys, rs)
    g_expr = g_value(k, xs, ys, rs)
    assert sp.expand(t_c5 - f_expr) == 0
    assert sp.expand(edge - g_expr) == 0


@pytest.mark.parametrize("k", range(3, 11))
def test_f_at_turan_point_is_lambda(k):
    assert f_value(k, Fraction(1, k), Fraction(1, k), Fraction(0)) == lam(k)
    assert g_value(k, Fraction(1, k), Fraction(1, k), 0) == 1 - Fraction(1, k)


@pytest.mark.parametrize("k", range(2, 11))
def test_f_at_right_endpoint_is_next_lambda(k):
    x, y = Fraction(1, k + 1), Fraction(2, k + 1)
    assert f_value(k, x, y, Fraction(1, 2)) == lam(k + 1)
    assert g_value(k, x, y, Fraction(1, 2)) == 1 - Fraction(1, k + 1)


def test_f_special_cases():
    assert f_value(2, Fraction(1, 2), Fraction(1, 2), 0) == 0
    assert g_value(2, Fraction(1, 2), Fraction(1, 2), 0) == Fraction(1, 2)
    assert g_value(4, 0, 1, Fraction(1, 3)) == Fraction(1, 3)
    k, x = 6, Fraction(1, 7)
    m = k - 1
    expected = x**5 * (Fraction(1, 10) * m * (m - 1) * (m - 2) * (m - 3) * (m - 4)
                       + Fraction(1, 2) * m * (m - 1) * (m - 2) * (m - 3) + Fraction(1, 2) * m * (m - 1) * (m - 2))
    assert f_value(k, x, 0, Fraction(1, 4)) == expected


def test_exact_and_float_evaluations_agree():
    rng = random.Random(11)
    for _ in range(1000):
        k = rng.randint(2, 8)
        x = Fraction(rng.randint(0, 100), 100 * (k - 1))
        y = 1 - (k - 1) * x
        rho = Fraction(rng.randint(0, 50), 100)
        for fn in (f_value, g_value):
            exact = fn(k, x, y, rho)
            approx = fn(k, float(x), float(y), float(rho))
            assert math.isclose(float(exact), approx, rel_tol=1e-12, abs_tol=1e-15)


def test_rho_from_examples():
    assert rho_from(3, Fraction(2, 3), Fraction(1, 3)) == (0, "boundary")
    r = rho_from(2, 0.55, 0)
    assert r.rho == pytest.approx(0.55) and not r.feasible
    assert rho_from(2, Fraction(11, 20), Fraction(2, 5)).rho == (Fraction(11, 20) - Fraction(12, 25)) / Fraction(9, 25)
    assert rho_from(2, Fraction(11, 20), Fraction(2, 5)).status == "interior"
    with pytest.raises(DegenerateError):
        rho_from(3, 0.7, 0.5)
    with pytest.raises(ValueError):
        rho_from(3, 0.7, 0.1, convention="Z")


def test_k2_reduced():
    assert k2_reduced(0, Fraction(3, 5)) == 0
    with pytest.raises(ValueError):
        k2_reduced(1, Fraction(1, 2))
    x, p = Fraction(2, 5), Fraction(11, 20)
    assert k2_reduced(x, p) == f_value(2, x, 1 - x, rho_from(2, p, x).rho)


def test_convention_report_identifies_g_consistent_substitution():
    rng = random.Random(3)
    points = [(Fraction(rng.randint(1, 90), 100), Fraction(rng.randint(50, 66), 100)) for _ in range(20)]
    rep = convention_report(points)
    # at k = 2 conventions A and B coincide because (k-1)_2 = 0
    assert rep["matching"] == ["A", "B"]
    assert not any(row["printed"] for row in rep["points"])


def test_feasible_set_tangency_at_knots():
    for k in range(2, 7):
        pieces, touch = feasible_set(k, 1 - Fraction(1, k))
        assert touch == [Fraction(1, k)]
    assert feasible_set(2, Fraction(2, 3)) == ([(Fraction(1, 3), Fraction(1, 3))], [])
    assert feasible_set(2, Fraction(9, 10)) == ([], [])


@pytest.mark.parametrize("k", [2, 3, 4])
def test_fmin_endpoints(k):
    lo, hi = 1 - Fraction(1, k), 1 - Fraction(1, k + 1)
    assert fmin(k, lo).value == lam(k)
    assert fmin(k, hi).value == lam(k + 1)
    assert abs(float(fmin(k, float(lo)).value) - float(lam(k))) < 1e-9
    assert abs(float(fmin(k, float(hi)).value) - float(lam(k + 1))) < 1e-9


def test_fmin_k2_interior():
    sol = fmin(2, 0.55)
    assert sol.status == "optimal-grid"
    assert 1 / 3 < sol.point.x < 1 / 2
    assert sol.value == pytest.approx(0.0031485713242542, rel=1e-9)
    assert fmin(2, 0.5).value == 0


def test_fmin_rejects_wrong_regime():
    with pytest.raises(ValueError):
        fmin(2, 0.7)
    with pytest.raises(ValueError):
        fmin(1, 0.2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0, 1))
def test_solution_satisfies_edge_constraint(k, t):
    lo, hi = 1 - 1 / k, 1 - 1 / (k + 1)
    p = lo + t * (hi - lo)
    sol = fmin(k, p, grid=2000)
    pt = sol.point
    assert abs(float(g_value(k, pt.x, pt.y, pt.rho)) - p) < 1e-10
    assert -1e-12 <= float(pt.rho) <= 0.5 + 1e-12
    assert abs((k - 1) * float(pt.x) + float(pt.y) - 1) < 1e-12
    assert float(sol.value) <= float(secant_L(p)) + 1e-12


def test_golden_section_finds_parabola_vertex():
    assert golden_section(lambda x: (x - 0.3) ** 2, 0, 1, 1e-10) == pytest.approx(0.3, abs=1e-9)


def test_secant_at_and_between_knots():
    for k in range(1, 9):
        assert secant_L(1 - Fraction(1, k)) == lam(k)
    mid = (Fraction(2, 3) + Fraction(3, 4)) / 2
    assert secant_L(mid) == (lam(3) + lam(4)) / 2
    assert isinstance(secant_L(0.6), float)
    assert regime_of(Fraction(2, 3)) == 3


def test_curve_rows_and_knots():
    assert len(fmin_curve(include_knots=False, grid=500)) == 76
    assert knots_between(Fraction(1, 2), Fraction(7, 8)) == [1 - Fraction(1, k) for k in range(2, 9)]
    rows = fmin_curve(grid=1000)
    assert len(rows) == 79
    by_p = {r[0]: r for r in rows}
    for k in range(2, 9):
        p, value, L, gap = by_p[1 - Fraction(1, k)]
        assert value == L == lam(k) and gap == 0
    assert curve_monotone(rows)


def test_layout_and_errors():
    lay = layout(3, 10, Fraction(1, 3))
    assert (lay.part_size, lay.y_lo, lay.y_mid, lay.y_size) == (3, 6, 8, 4)
    with pytest.raises(ValueError):
        layout(3, 10, 0.6)
    with pytest.raises(ValueError):
        build_construction(2, 50, 0.4, 0.6)
    with pytest.raises(ValueError):
        build_construction(2, 50, 0.4, 0.2, model="other")


def test_construction_is_deterministic_and_structured():
    a = build_construction(3, 60, 0.25, 0.3, seed=4)
    b = build_construction(3, 60, 0.25, 0.3, seed=4)
    c = build_construction(3, 60, 0.25, 0.3, seed=5)
    assert a == b and a != c
    A = a.adjacency()
    assert A[:15, :15].sum() == 0 and A[:15, 15:30].all()
    assert A[:30, 30:].all()
    Y = A[30:, 30:]
    assert Y[:15, :15].sum() == 0 and Y[15:, 15:].sum() == 0  # bipartite, hence C5-free


def test_edge_density_tracks_g_over_seeds():
    n, k, x, rho = 400, 3, 0.25, 0.3
    g = float(g_value(k, x, 1 - (k - 1) * x, rho))
    for seed in range(10):
        G = build_construction(k, n, x, rho, seed=seed)
        assert abs(G.edge_count / math.comb(n, 2) - g) / g < 3 / math.sqrt(n)


def test_near_turan_construction():
    G = build_construction(3, 500, Fraction(1, 3), 0, seed=0)
    density = count_c5(G) / 500**5
    assert abs(density - float(lam(3))) / float(lam(3)) < 0.05


def test_regular_model_degrees_are_concentrated():
    x, rho = 0.4, (0.55 - 0.48) / 0.36
    for seed in range(3):
        G = build_construction(2, 1000, x, rho, seed=seed, model="regular")
        assert y_degree_concentration(G, 2, x, rho) >= 0.95


def test_construction_report_fields():
    rep = construction_report(2, 100, 0.4, 0.2, seed=1)
    assert rep["c5_count"] == count_c5(build_construction(2, 100, 0.4, 0.2, seed=1))
    assert 0 <= rep["y_degree_within_10pct"] <= 1
