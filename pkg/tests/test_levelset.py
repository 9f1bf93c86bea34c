"""Smoothed projector, profile initialization, screened-Poisson solve."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cauchyls import (GAMMA2, TraceFn, build_grid, component_count,
                      curvature_term, init_levelset, sharp_indicator,
                      smoothed_heaviside, smoothed_heaviside_deriv,
                      solve_helmholtz_neumann, trace_from_function)


# -- one-sided ramp projector -------------------------------------------------

@pytest.mark.parametrize("t, eps, expected", [
    (-2.0, 1.0, 0.0),   # below the band
    (-1.0, 1.0, 0.0),   # band entry
    (-0.5, 1.0, 0.5),   # ramp midpoint
    (0.0, 1.0, 1.0),    # the projector is already 1 at zero
    (1.0, 1.0, 1.0),    # above
])
def test_ramp_values(t, eps, expected):
    assert smoothed_heaviside(np.array([t]), eps)[0] == pytest.approx(expected)


@pytest.mark.parametrize("t, eps, expected", [
    (-2.0, 1.0, 0.0),
    (-0.5, 1.0, 1.0),   # 1/eps inside the band
    (0.5, 1.0, 0.0),
    (-0.25, 0.5, 2.0),
])
def test_ramp_derivative_values(t, eps, expected):
    assert smoothed_heaviside_deriv(np.array([t]), eps)[0] == pytest.approx(expected)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 3.0))
def test_ramp_monotone_and_bounded(t1, t2, eps):
    lo, hi = sorted((t1, t2))
    h_lo = smoothed_heaviside(np.array([lo]), eps)[0]
    h_hi = smoothed_heaviside(np.array([hi]), eps)[0]
    assert 0.0 <= h_lo <= h_hi <= 1.0


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 3.0))
def test_ramp_scales_with_eps(t, eps):
    a = smoothed_heaviside(np.array([t]), eps)[0]
    b = smoothed_heaviside(np.array([t / eps]), 1.0)[0]
    assert a == pytest.approx(b)


def test_sharp_indicator_threshold_at_zero():
    vals = sharp_indicator(np.array([-1.0, -1e-12, 0.0, 1e-12, 2.0]))
    assert np.array_equal(vals, [0.0, 0.0, 1.0, 1.0, 1.0])


# -- component counting -------------------------------------------------------

def _runs_above(vals, thr):
    above = (np.asarray(vals) > thr).astype(int)
    return int(np.sum(np.diff(np.concatenate([[0], above])) == 1))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([0.0, 0.3, 0.7, 1.0]), min_size=1, max_size=40))
def test_component_count_matches_run_length_reference(vals):
    assert component_count(np.array(vals)) == _runs_above(vals, 0.5)


def test_component_count_accepts_traces():
    g = build_grid(1.0, 0.5, 16)
    t = trace_from_function(g, GAMMA2, lambda x: (np.abs(x - 0.5) < 0.2) * 1.0)
    assert component_count(t) == 1


# -- profile initialization ---------------------------------------------------

def test_init_levelset_signs_and_clipping():
    g = build_grid(1.0, 0.5, 64)
    eps = 4 * g.hx
    phi = init_levelset(g, ((0.25, 0.5),), eps)
    x = g.xs
    inside = (x > 0.25 + eps) & (x < 0.5 - eps)
    outside = (x < 0.25 - 4 * eps) | (x > 0.5 + 4 * eps)
    assert np.all(phi.values[inside] > 0)
    assert np.all(phi.values[outside] == -3 * eps)  # clipped plateau
    assert phi.values.max() <= 3 * eps
    # unit slope across the interface
    k = np.searchsorted(x, 0.25)
    assert abs((phi.values[k + 1] - phi.values[k]) / g.hx) == pytest.approx(1.0)


def test_init_levelset_constant_mode():
    g = build_grid(1.0, 0.5, 16)
    phi = init_levelset(g, ((0.2, 0.4),), 0.1, constant=-0.7)
    assert np.all(phi.values == -0.7)


def test_init_levelset_empty_union_is_deep_outside():
    g = build_grid(1.0, 0.5, 16)
    phi = init_levelset(g, (), 0.1)
    assert np.allclose(phi.values, -0.3)


def test_init_levelset_rejects_bad_intervals():
    g = build_grid(1.0, 0.5, 16)
    with pytest.raises(ValueError):
        init_levelset(g, ((0.4, 0.4),), 0.1)
    with pytest.raises(ValueError):
        init_levelset(g, ((0.1, 0.5), (0.4, 0.8)), 0.1)


# -- screened Poisson solve ---------------------------------------------------

def test_helmholtz_fixes_constants():
    g = build_grid(1.0, 0.5, 32)
    rhs = trace_from_function(g, GAMMA2, lambda x: 2.5 * np.ones_like(x))
    sol = solve_helmholtz_neumann(rhs)
    assert np.allclose(sol.values, 2.5, atol=1e-12)


def test_helmholtz_damps_cosine_mode():
    g = build_grid(1.0, 0.5, 128)
    k = 2
    rhs = trace_from_function(g, GAMMA2, lambda x: np.cos(k * np.pi * x))
    sol = solve_helmholtz_neumann(rhs)
    exact = np.cos(k * np.pi * g.xs) / (1.0 + (k * np.pi) ** 2)
    rel = np.linalg.norm(sol.values - exact) / np.linalg.norm(exact)
    assert rel < 1e-3


def test_helmholtz_preserves_trapezoid_mean():
    g = build_grid(1.0, 0.5, 64)
    rng = np.random.default_rng(11)
    rhs = TraceFn(g, GAMMA2, rng.normal(size=g.nx + 1))
    sol = solve_helmholtz_neumann(rhs)
    w = np.full(g.nx + 1, g.hx)
    w[0] = w[-1] = 0.5 * g.hx
    assert np.dot(w, sol.values) == pytest.approx(np.dot(w, rhs.values),
                                                  abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_helmholtz_smooths(seed):
    # the solve never amplifies: ||sol||_inf <= ||rhs||_inf (M-matrix bound)
    g = build_grid(1.0, 0.5, 32)
    rng = np.random.default_rng(seed)
    rhs = TraceFn(g, GAMMA2, rng.uniform(-1, 1, size=g.nx + 1))
    sol = solve_helmholtz_neumann(rhs)
    assert np.abs(sol.values).max() <= np.abs(rhs.values).max() + 1e-12


# -- curvature source ---------------------------------------------------------

def test_curvature_vanishes_on_flat_profiles():
    g = build_grid(1.0, 0.5, 32)
    phi = trace_from_function(g, GAMMA2, lambda x: 0.3 * np.ones_like(x))
    out = curvature_term(phi, eps=0.1, eta=1e-6, beta=1e-3)
    assert np.allclose(out.values, 0.0)


def test_curvature_scales_linearly_in_beta():
    g = build_grid(1.0, 0.5, 64)
    phi = init_levelset(g, ((0.3, 0.6),), 4 * g.hx)
    a = curvature_term(phi, eps=4 * g.hx, eta=1e-6, beta=1e-3)
    b = curvature_term(phi, eps=4 * g.hx, eta=1e-6, beta=2e-3)
    assert np.allclose(b.values, 2.0 * a.values)


def test_curvature_requires_positive_eta():
    g = build_grid(1.0, 0.5, 16)
    phi = init_levelset(g, ((0.3, 0.6),), 0.1)
    with pytest.raises(ValueError):
        curvature_term(phi, eps=0.1, eta=0.0, beta=1e-3)
