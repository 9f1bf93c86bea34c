"""Forward operator, data offset and adjoint for the flux identification problem.

The unknown is the conormal flux q on the top edge. Superposition splits the
underdetermined boundary-value problem into a linear part driven only by q
and an affine offset z driven by the known data, so the measured bottom-edge
flux satisfies (forward map)(q) = g2 - z. All three maps below solve a mixed
problem with Dirichlet data on the bottom edge and Neumann data elsewhere;
the context caches that factorization once per grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GAMMA1, GAMMA2, GAMMA3, Grid, TraceFn, zero_trace
from .pde import Coefficient, Field, MixedSolver, neumann_trace

# assembled dense matrices are limited to desk-scale widths
MAX_ASSEMBLE_NX = 256


@dataclass(frozen=True)
class CauchyData:
    """Over-determined bottom-edge data pair plus its derived offset.

    delta is the noise magnitude in the trace-weighted L2 norm; 0 means the
    pair is exact. rhs is the driving term for the flux iteration.
    """

    g1: TraceFn
    g2: TraceFn
    delta: float
    z: TraceFn

    def __post_init__(self):
        if self.g1.part is not GAMMA1 or self.g2.part is not GAMMA1 \
                or self.z.part is not GAMMA1:
            raise ValueError("Cauchy data and offset live on the bottom edge")
        if self.delta < 0:
            raise ValueError("noise magnitude cannot be negative")

    @property
    def rhs(self) -> TraceFn:
        return self.g2.with_values(self.g2.values - self.z.values)


class OperatorContext:
    """Grid, coefficient and source bundled with a cached factorization."""

    def __init__(self, grid: Grid, coefficient: Coefficient | None = None,
                 f: Field | None = None):
        self.grid = grid
        self.coefficient = coefficient if coefficient is not None else Coefficient()
        if f is not None and f.grid != grid:
            raise ValueError("source field lives on a different grid")
        self.f = f
        self._solver: MixedSolver | None = None

    @property
    def solver(self) -> MixedSolver:
        if self._solver is None:
            self._solver = MixedSolver(
                self.grid, self.coefficient,
                {GAMMA1: "dirichlet", GAMMA2: "neumann", GAMMA3: "neumann"},
            )
        return self._solver


def compute_offset_z(ctx: OperatorContext, g1: TraceFn) -> TraceFn:
    """Bottom-edge flux produced by the known data alone (zero top flux)."""
    u = ctx.solver.solve(dirichlet={GAMMA1: g1}, f=ctx.f)
    return neumann_trace(u, ctx.coefficient, GAMMA1)


def apply_forward(ctx: OperatorContext, q: TraceFn) -> TraceFn:
    """Bottom-edge flux produced by a top-edge flux q (zero data, zero source)."""
    if q.part is not GAMMA2 or q.grid != ctx.grid:
        raise ValueError("forward map expects a top-edge trace on the context grid")
    u = ctx.solver.solve(neumann={GAMMA2: q})
    return neumann_trace(u, ctx.coefficient, GAMMA1)


def apply_adjoint(ctx: OperatorContext, r: TraceFn) -> TraceFn:
    """Adjoint of the forward map under the trace-weighted L2 pairings.

    Solves the homogeneous problem with Dirichlet value r on the bottom edge
    and returns the negated top-edge Dirichlet trace. Green's identity gives
    <forward(q), r> = <q, adjoint(r)> up to discretization error.
    """
    if r.part is not GAMMA1 or r.grid != ctx.grid:
        raise ValueError("adjoint expects a bottom-edge trace on the context grid")
    u = ctx.solver.solve(dirichlet={GAMMA1: r})
    return TraceFn(ctx.grid, GAMMA2, -u.values[-1, :].copy())


def assemble_forward_matrix(ctx: OperatorContext) -> np.ndarray:
    """Dense matrix of the forward map in the nodal basis, column by column."""
    nx = ctx.grid.nx
    if nx > MAX_ASSEMBLE_NX:
        raise ValueError(f"assembly limited to nx <= {MAX_ASSEMBLE_NX}, got {nx}")
    m = np.empty((nx + 1, nx + 1))
    e = zero_trace(ctx.grid, GAMMA2)
    for j in range(nx + 1):
        vals = np.zeros(nx + 1)
        vals[j] = 1.0
        m[:, j] = apply_forward(ctx, e.with_values(vals)).values
    return m


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values in descending order."""
    return np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)


def decay_slope(sigma: np.ndarray, lo: int = 2, hi: int = 15) -> float:
    """Least-squares slope of log(sigma_k) over 1-based positions lo..hi."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size < hi:
        raise ValueError(f"need at least {hi} singular values, got {sigma.size}")
    k = np.arange(lo, hi + 1)
    vals = sigma[lo - 1 : hi]
    floor = np.finfo(float).tiny
    return float(np.polyfit(k, np.log(np.maximum(vals, floor)), 1)[0])
