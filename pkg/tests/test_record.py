"""Run records and the error/component observation."""

import numpy as np
import pytest

from cauchyls import GAMMA2, build_grid, l2_norm_trace, zero_trace
from cauchyls.record import STOP_REASONS, RunRecord, observe


def test_observe_reports_iterate_distance_and_components():
    g = build_grid(1.0, 0.5, 16)
    truth = zero_trace(g, GAMMA2).with_values(
        ((g.xs >= 0.3) & (g.xs <= 0.7)).astype(float))
    q = truth.with_values(np.clip(truth.values + 0.2, 0.0, 1.0))
    err, comps = observe(q, truth)
    # the error is the L2 distance of the iterate itself, ramps included
    assert err == pytest.approx(l2_norm_trace(truth.with_values(
        q.values - truth.values)))
    assert comps == 1


def test_observe_without_truth_counts_only_components():
    g = build_grid(1.0, 0.5, 16)
    q = zero_trace(g, GAMMA2).with_values((g.xs > 0.5).astype(float))
    err, comps = observe(q, None)
    assert err is None and comps == 1


def test_finish_validates_stop_reason():
    g = build_grid(1.0, 0.5, 8)
    t = zero_trace(g, GAMMA2)
    rec = RunRecord()
    with pytest.raises(ValueError):
        rec.finish("wandered_off", 3, t, t, 0.1)
    for reason in STOP_REASONS:
        assert RunRecord().finish(reason, 1, t, t, 0.0).stop_reason == reason
