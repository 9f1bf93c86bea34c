"""Shared iteration history for both reconstruction methods."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import l2_norm_trace
from .grid import TraceFn
from .levelset import component_count

STOP_DISCREPANCY = "discrepancy"
STOP_MAX_ITERS = "max_iters"
STOP_TARGET_ERROR = "target_error"
STOP_STAGNATION = "stagnation"

STOP_REASONS = (STOP_DISCREPANCY, STOP_MAX_ITERS, STOP_TARGET_ERROR,
                STOP_STAGNATION)


def observe(q: TraceFn, truth: TraceFn | None) -> tuple[float | None, int]:
    """Iterate error and component count of the reconstruction set.

    The error is the L2 distance between the flux iterate itself and the
    truth flux; for a sharp iterate that coincides with the misclassified
    mass, for the ramp iterate it additionally carries the transition
    bands. The component count is taken on the mid-level set {q > 1/2},
    which is the set the iterate would round to.
    """
    err = None
    if truth is not None:
        err = l2_norm_trace(truth.with_values(q.values - truth.values))
    return err, component_count(q.values)


@dataclass
class RunRecord:
    """Per-iteration histories, snapshots and the final iterate.

    Histories include the initial state, so their length is the number of
    completed iterations plus one. errors is None when no truth was supplied.
    asymp_gap is an optional diagnostic stream some methods fill in.
    """

    residuals: list[float] = field(default_factory=list)
    errors: list[float] | None = None
    components: list[int] = field(default_factory=list)
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    stop_reason: str = STOP_MAX_ITERS
    stop_iteration: int = 0
    final_phi: TraceFn | None = None
    final_q: TraceFn | None = None
    wall_time: float = 0.0
    asymp_gap: list[float] | None = None

    def record(self, k: int, residual: float, error: float | None,
               n_components: int, phi: TraceFn, q: TraceFn,
               snapshot_iters=()) -> None:
        self.residuals.append(residual)
        if error is not None:
            if self.errors is None:
                self.errors = []
            self.errors.append(error)
        self.components.append(n_components)
        if k in snapshot_iters:
            self.snapshots[k] = (phi.values.copy(), q.values.copy())

    def finish(self, reason: str, k: int, phi: TraceFn, q: TraceFn,
               wall_time: float) -> "RunRecord":
        if reason not in STOP_REASONS:
            raise ValueError(f"unknown stop reason {reason!r}")
        self.stop_reason = reason
        self.stop_iteration = k
        self.final_phi = phi
        self.final_q = q
        self.wall_time = wall_time
        return self
