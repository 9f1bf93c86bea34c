"""Level-set transport method driven by a potential-flow velocity.

The sharp indicator q = [phi >= 0] is evolved by advecting phi with a
velocity field V = psi' on the top edge, where psi solves a Poisson problem
whose source couples the adjoint-applied residual with the sign of the
current indicator. That choice makes the indicator error contract along the
flow for consistent data. Transport uses first-order upwind differences
with Courant-limited sub-stepping, so profile bounds never expand.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from . import record as rec
from .data import l2_norm_trace
from .grid import TraceFn
from .levelset import sharp_indicator
from .operator import CauchyData, OperatorContext, apply_adjoint, apply_forward
from .record import RunRecord, observe

STAGNATION_TOL = 1e-14
STAGNATION_STEPS = 10
VELOCITY_FLOOR = 1e-12


@dataclass(frozen=True)
class TransportParams:
    """Outer step cap dt, indicator-sign clamp and Courant bound."""

    dt: float = 1.0
    eps_clamp: float = 0.1
    tau: float = 1.5
    max_iters: int = 5000
    cfl_max: float = 0.9
    target_error: float | None = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0 < self.eps_clamp <= 1:
            raise ValueError("eps_clamp must lie in (0, 1]")
        if not 0 < self.cfl_max <= 0.9:
            raise ValueError("cfl_max must lie in (0, 0.9]")
        if self.max_iters < 0:
            raise ValueError("max_iters cannot be negative")


def front_velocity(q: TraceFn, residual: TraceFn, ctx: OperatorContext,
                   params: TransportParams) -> TraceFn:
    """Velocity V = psi' with -psi'' = 2 * adjoint(residual) / (2q - 1).

    psi vanishes at both ends of the top edge. The denominator is clamped
    away from zero at eps_clamp, with sign +1 at an exact zero. V is zeroed
    at the two end nodes.
    """
    s = 2.0 * q.values - 1.0
    sign = np.where(s >= 0.0, 1.0, -1.0)
    s = np.where(np.abs(s) < params.eps_clamp, params.eps_clamp * sign, s)
    grad = apply_adjoint(ctx, residual)
    rhs = 2.0 * grad.values / s

    h = q.grid.hx
    n = rhs.size
    # interior Poisson solve, homogeneous Dirichlet ends
    ab = np.zeros((2, n - 2))
    ab[0, 1:] = -1.0 / (h * h)
    ab[1, :] = 2.0 / (h * h)
    psi = np.zeros(n)
    psi[1:-1] = solveh_banded(ab, rhs[1:-1])

    v = np.gradient(psi, h)
    v[0] = v[-1] = 0.0
    return q.with_values(v)


def upwind_step(phi: np.ndarray, v: np.ndarray, dt: float, h: float) -> np.ndarray:
    """Single first-order upwind update; the caller enforces the CFL bound.

    Interior nodes difference against the upwind neighbor. At the ends only
    the interior-side difference exists, so outflow uses it and inflow holds
    the value; under the CFL bound the update is a convex combination and
    min/max bounds are preserved.
    """
    phi = np.asarray(phi, dtype=float)
    v = np.asarray(v, dtype=float)
    dm = np.empty_like(phi)
    dp = np.empty_like(phi)
    dm[1:] = (phi[1:] - phi[:-1]) / h
    dp[:-1] = (phi[1:] - phi[:-1]) / h
    dm[0] = 0.0   # no upwind neighbor: inflow holds the value
    dp[-1] = 0.0
    return phi - dt * (np.maximum(v, 0.0) * dm + np.minimum(v, 0.0) * dp)


def transport_step(phi: TraceFn, v: TraceFn, dt: float,
                   cfl_max: float) -> TraceFn:
    """Advance phi by dt, sub-stepping so every substep satisfies the bound."""
    h = phi.grid.hx
    vmax = float(np.max(np.abs(v.values)))
    n_sub = max(1, math.ceil(vmax * dt / (cfl_max * h))) if vmax > 0 else 1
    vals = phi.values
    for _ in range(n_sub):
        vals = upwind_step(vals, v.values, dt / n_sub, h)
    return phi.with_values(vals)


def run_transport(phi0: TraceFn, data: CauchyData, ctx: OperatorContext,
                  params: TransportParams, truth: TraceFn | None = None,
                  snapshot_iters=()) -> RunRecord:
    """Iterate the transport flow with the adaptive outer step.

    The outer step is min(dt, 0.5 h / max|V|), so fronts move at most half a
    cell per iteration before sub-stepping even applies. Stopping mirrors
    the gradient flow: discrepancy for noisy data (tau > 1 required), target
    error when truth is given, stagnation of the velocity, or the cap. When
    truth is supplied the record's asymp_gap stream holds the discrete
    violation of the error-contraction identity d/dt ||q - truth||^2 =
    -2 ||residual||^2; it is recorded, not asserted.
    """
    if data.delta > 0 and not params.tau > 1:
        raise ValueError("the discrepancy principle requires tau > 1 "
                         "whenever the data carries noise (delta > 0)")
    h = ctx.grid.hx
    phi = phi0
    out = RunRecord()
    if truth is not None:
        out.asymp_gap = []
    t0 = time.perf_counter()
    stalled = 0
    k = 0
    while True:
        q = phi.with_values(sharp_indicator(phi.values))
        lq = apply_forward(ctx, q)
        r = lq.with_values(lq.values - data.rhs.values)
        res_norm = l2_norm_trace(r)
        err, comps = observe(q, truth)
        out.record(k, res_norm, err, comps, phi, q, snapshot_iters)

        if data.delta > 0 and res_norm <= params.tau * data.delta:
            reason = rec.STOP_DISCREPANCY
            break
        if params.target_error is not None and err is not None \
                and err <= params.target_error:
            reason = rec.STOP_TARGET_ERROR
            break
        if k >= params.max_iters:
            reason = rec.STOP_MAX_ITERS
            break

        v = front_velocity(q, r, ctx, params)
        vmax = float(np.max(np.abs(v.values)))
        dt = min(params.dt, 0.5 * h / max(vmax, VELOCITY_FLOOR))
        phi = transport_step(phi, v, dt, params.cfl_max)
        k += 1

        if truth is not None:
            q_next = sharp_indicator(phi.values)
            err_next = l2_norm_trace(truth.with_values(q_next - truth.values))
            out.asymp_gap.append(
                (err_next ** 2 - err ** 2) / dt + 2.0 * res_norm ** 2)

        if vmax <= STAGNATION_TOL:
            stalled += 1
            if stalled >= STAGNATION_STEPS:
                q = phi.with_values(sharp_indicator(phi.values))
                lq = apply_forward(ctx, q)
                r = lq.with_values(lq.values - data.rhs.values)
                err, comps = observe(q, truth)
                out.record(k, l2_norm_trace(r), err, comps, phi, q,
                           snapshot_iters)
                reason = rec.STOP_STAGNATION
                break
        else:
            stalled = 0

    q = phi.with_values(sharp_indicator(phi.values))
    return out.finish(reason, k, phi, q, time.perf_counter() - t0)
