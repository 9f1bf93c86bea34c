"""Grid layout, traces, quadrature and the nested transfer operators."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cauchyls import (GAMMA1, GAMMA2, GAMMA3, TraceFn, boundary_nodes,
                      build_grid, prolong_trace, quadrature_weights,
                      restrict_trace, trace_from_function, zero_trace)


def test_build_grid_derives_ny_from_height():
    g = build_grid(1.0, 0.5, 64)
    assert g.ny == 32
    assert g.hx == pytest.approx(1.0 / 64)
    assert g.hy == pytest.approx(0.5 / 32)


def test_boundary_node_counts():
    g = build_grid(1.0, 0.5, 16)
    # horizontal edges own the corners, sides exclude them
    assert boundary_nodes(g, GAMMA1).shape == (17, 2)
    assert boundary_nodes(g, GAMMA2).shape == (17, 2)
    assert boundary_nodes(g, GAMMA3).shape == (2 * (g.ny - 1), 2)


def test_boundary_nodes_rows_and_ordering():
    g = build_grid(1.0, 0.5, 8)
    bottom = boundary_nodes(g, GAMMA1)
    top = boundary_nodes(g, GAMMA2)
    assert np.all(bottom[:, 1] == 0)
    assert np.all(top[:, 1] == g.ny)
    assert np.all(np.diff(bottom[:, 0]) == 1)
    sides = boundary_nodes(g, GAMMA3)
    left, right = sides[: g.ny - 1], sides[g.ny - 1:]
    assert np.all(left[:, 0] == 0) and np.all(right[:, 0] == g.nx)
    assert np.all(np.diff(left[:, 1]) == 1)


def test_quadrature_integrates_constant_to_edge_length():
    g = build_grid(1.0, 0.5, 32)
    for part, length in ((GAMMA1, 1.0), (GAMMA2, 1.0),
                         (GAMMA3, 2 * 0.5 - 2 * g.hy)):
        w = quadrature_weights(g, part)
        assert np.sum(w) == pytest.approx(length)


def test_trace_coords_follow_arc_coordinate():
    g = build_grid(1.0, 0.5, 8)
    top = zero_trace(g, GAMMA2)
    assert np.allclose(top.coords, g.xs)
    side = zero_trace(g, GAMMA3)
    ys_interior = g.ys[1:-1]
    assert np.allclose(side.coords, np.concatenate([ys_interior, ys_interior]))


def test_trace_from_function_samples_arc_coordinate():
    g = build_grid(1.0, 0.5, 8)
    t = trace_from_function(g, GAMMA2, lambda x: x ** 2)
    assert np.allclose(t.values, g.xs ** 2)


def test_trace_validation_rejects_bad_values():
    g = build_grid(1.0, 0.5, 8)
    with pytest.raises(ValueError):
        TraceFn(g, GAMMA2, np.zeros(3))
    with pytest.raises(ValueError):
        TraceFn(g, GAMMA2, np.full(9, np.nan))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=9, max_size=9))
def test_restrict_after_prolong_is_identity(vals):
    coarse = build_grid(1.0, 0.5, 8)
    fine = build_grid(1.0, 0.5, 16)
    t = TraceFn(coarse, GAMMA2, np.array(vals))
    back = restrict_trace(prolong_trace(t, fine), coarse)
    assert np.array_equal(back.values, t.values)


def test_restrict_is_injection_at_shared_nodes():
    fine = build_grid(1.0, 0.5, 32)
    coarse = build_grid(1.0, 0.5, 8)
    t = trace_from_function(fine, GAMMA1, np.sin)
    r = restrict_trace(t, coarse)
    assert np.allclose(r.values, np.sin(coarse.xs))


def test_restrict_side_trace_round_trip():
    coarse = build_grid(1.0, 0.5, 8)
    fine = build_grid(1.0, 0.5, 16)
    t = trace_from_function(coarse, GAMMA3, lambda s: 3.0 * s - 1.0)
    back = restrict_trace(prolong_trace(t, fine), coarse)
    assert np.allclose(back.values, t.values)


def test_transfer_rejects_non_nested_grids():
    a = build_grid(1.0, 0.5, 12)
    b = build_grid(1.0, 0.5, 8)
    with pytest.raises(ValueError):
        restrict_trace(zero_trace(a, GAMMA2), b)


def test_grid_guards():
    with pytest.raises(ValueError):
        build_grid(-1.0, 0.5, 8)
    with pytest.raises(ValueError):
        build_grid(1.0, 0.5, 1)
