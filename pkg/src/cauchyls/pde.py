"""Mixed Dirichlet/Neumann finite-difference solver on the strip.

Discretizes -div(a grad u) = f with the five-point scheme and coefficients
averaged at cell faces. Neumann conditions enter through centered ghost
elimination written in control-volume (half-cell) form: the equation at a
boundary node is the interior stencil restricted to the clipped cell, with
the prescribed conormal flux integrated over the boundary segment the node
owns. Scaling each equation by its cell fraction keeps the reduced system
symmetric positive definite, so a single sparse factorization serves every
right-hand side with the same boundary-condition pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .grid import GAMMA1, GAMMA2, GAMMA3, BoundaryPart, Grid, TraceFn

# relative residual bound every linear solve must meet
SOLVER_RTOL = 1e-10


class SolverError(RuntimeError):
    """Linear solve failed or did not reach the required residual."""


@dataclass(frozen=True)
class Coefficient:
    """Scalar diffusion coefficient a(x, y) with ellipticity bound alpha.

    fn=None means the constant coefficient 1. The bound is validated at
    every evaluation point used by the assembly.
    """

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    alpha: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("ellipticity bound alpha must be positive")

    def __call__(self, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        if self.fn is None:
            return np.ones_like(x)
        vals = np.asarray(self.fn(x, y), dtype=float)
        vals = np.broadcast_to(vals, x.shape).copy()
        if np.any(vals < self.alpha - 1e-14):
            raise ValueError("coefficient drops below its ellipticity bound")
        return vals


@dataclass(frozen=True)
class Field:
    """Nodal scalar field; values[j, i] sits at (i*hx, j*hy)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.ny + 1, self.grid.nx + 1):
            raise ValueError(f"field shape {vals.shape} does not match grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")


def field_from_function(grid: Grid, fn: Callable) -> Field:
    x, y = np.meshgrid(grid.xs, grid.ys)
    return Field(grid, np.asarray(fn(x, y), dtype=float))


@dataclass(frozen=True)
class Dirichlet:
    trace: TraceFn | None = None  # None means homogeneous


@dataclass(frozen=True)
class Neumann:
    trace: TraceFn | None = None


@dataclass(frozen=True)
class BvpSpec:
    """A full boundary-value problem: operator data plus one condition per part."""

    grid: Grid
    coefficient: Coefficient
    f: Field | None
    bcs: Mapping[BoundaryPart, Dirichlet | Neumann]

    def __post_init__(self):
        parts = set(self.bcs)
        if parts != {GAMMA1, GAMMA2, GAMMA3}:
            raise ValueError("every boundary part needs exactly one condition")
        if not any(isinstance(bc, Dirichlet) for bc in self.bcs.values()):
            raise ValueError("at least one part must be Dirichlet, "
                             "an all-Neumann problem is singular")
        if self.f is not None and self.f.grid != self.grid:
            raise ValueError("source field lives on a different grid")
        for part, bc in self.bcs.items():
            if bc.trace is not None and (bc.trace.grid != self.grid
                                         or bc.trace.part is not part):
                raise ValueError(f"boundary data for {part.value} mismatched")


# geometric edges and the part whose condition applies there
_EDGES = {
    "bottom": GAMMA1,
    "top": GAMMA2,
    "left": GAMMA3,
    "right": GAMMA3,
}


def _edge_data(grid: Grid, edge: str, trace: TraceFn | None) -> np.ndarray:
    """Nodal boundary values along a full geometric edge, corners included.

    Side traces carry no corner nodes; the closure values there are filled by
    quadratic extrapolation (constant extension costs half an order at
    Neumann-Neumann corners) and only matter when the corner itself is not
    Dirichlet-constrained.
    """
    n = grid.nx + 1 if edge in ("bottom", "top") else grid.ny + 1
    out = np.zeros(n)
    if trace is None:
        return out
    if edge in ("bottom", "top"):
        out[:] = trace.values
        return out
    ny = grid.ny
    side = trace.values[: ny - 1] if edge == "left" else trace.values[ny - 1 :]
    out[1:ny] = side
    out[0] = _extrapolate_corner(side)
    out[ny] = _extrapolate_corner(side[::-1])
    return out


def _extrapolate_corner(side_vals: np.ndarray) -> float:
    """Quadratic extrapolation to the corner from the three nearest side values."""
    return 3.0 * side_vals[0] - 3.0 * side_vals[1] + side_vals[2]


class MixedSolver:
    """Assembled and factorized system for one boundary-condition pattern.

    The pattern maps each part to "dirichlet" or "neumann". Boundary data and
    sources are supplied per solve, so one factorization is reused across
    arbitrarily many right-hand sides.
    """

    def __init__(self, grid: Grid, coefficient: Coefficient,
                 pattern: Mapping[BoundaryPart, str]):
        if not any(kind == "dirichlet" for kind in pattern.values()):
            raise SolverError("all-Neumann pattern gives a singular system")
        self.grid = grid
        self.coefficient = coefficient
        self.pattern = dict(pattern)
        self._build()

    # -- assembly -----------------------------------------------------------

    def _build(self):
        g, a = self.grid, self.coefficient
        nx, ny, hx, hy = g.nx, g.ny, g.hx, g.hy
        n_nodes = (nx + 1) * (ny + 1)

        def nid(i, j):
            return j * (nx + 1) + i

        # cell fractions: half cells on edges, quarter cells at corners
        wx = np.ones(nx + 1)
        wx[0] = wx[-1] = 0.5
        wy = np.ones(ny + 1)
        wy[0] = wy[-1] = 0.5

        # face-averaged coefficients
        xf = (np.arange(nx) + 0.5) * hx
        ax = a(xf[None, :], g.ys[:, None])          # (ny+1, nx) vertical faces
        yf = (np.arange(ny) + 0.5) * hy
        ay = a(g.xs[None, :], yf[:, None])          # (ny, nx+1) horizontal faces

        rows, cols, data = [], [], []

        def add(r, c, v):
            rows.append(r)
            cols.append(c)
            data.append(v)

        # x-direction fluxes through faces between (i, j) and (i+1, j)
        jj, ii = np.meshgrid(np.arange(ny + 1), np.arange(nx), indexing="ij")
        cxy = ax * (wy[:, None] * hy) / hx
        left = nid(ii, jj).ravel()
        right = nid(ii + 1, jj).ravel()
        cvals = cxy.ravel()
        add(left, right, -cvals)
        add(right, left, -cvals)
        add(left, left, cvals)
        add(right, right, cvals)

        # y-direction fluxes through faces between (i, j) and (i, j+1)
        jj, ii = np.meshgrid(np.arange(ny), np.arange(nx + 1), indexing="ij")
        cyy = ay * (wx[None, :] * hx) / hy
        lower = nid(ii, jj).ravel()
        upper = nid(ii, jj + 1).ravel()
        cvals = cyy.ravel()
        add(lower, upper, -cvals)
        add(upper, lower, -cvals)
        add(lower, lower, cvals)
        add(upper, upper, cvals)

        A = sp.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n_nodes, n_nodes),
        ).tocsr()

        # Dirichlet constraints: a node is constrained when it lies on the
        # closure of any Dirichlet edge, regardless of which part owns it.
        mask = np.zeros((ny + 1, nx + 1), dtype=bool)
        if self.pattern[GAMMA1] == "dirichlet":
            mask[0, :] = True
        if self.pattern[GAMMA2] == "dirichlet":
            mask[ny, :] = True
        if self.pattern[GAMMA3] == "dirichlet":
            mask[:, 0] = True
            mask[:, nx] = True

        flat_mask = mask.ravel()
        self._mask = mask
        self._free = np.flatnonzero(~flat_mask)
        self._constrained = np.flatnonzero(flat_mask)
        A_ff = A[self._free][:, self._free].tocsc()
        self._A_fd = A[self._free][:, self._constrained].tocsr()
        self._lu = splu(A_ff)
        self._A_ff = A_ff

        # cached geometry for right-hand side construction
        self._wx, self._wy = wx, wy
        self._area = (wy[:, None] * hy) * (wx[None, :] * hx)
        self._seg = {
            "bottom": wx * hx, "top": wx * hx,
            "left": wy * hy, "right": wy * hy,
        }

    # -- right-hand side and solve ------------------------------------------

    def _dirichlet_values(self, data: Mapping[BoundaryPart, TraceFn | None]):
        g = self.grid
        nx, ny = g.nx, g.ny
        vals = np.zeros((ny + 1, nx + 1))
        if self.pattern[GAMMA1] == "dirichlet":
            t = data.get(GAMMA1)
            vals[0, :] = 0.0 if t is None else t.values
        if self.pattern[GAMMA2] == "dirichlet":
            t = data.get(GAMMA2)
            vals[ny, :] = 0.0 if t is None else t.values
        if self.pattern[GAMMA3] == "dirichlet":
            t = data.get(GAMMA3)
            side_l = np.zeros(ny - 1) if t is None else t.values[: ny - 1]
            side_r = np.zeros(ny - 1) if t is None else t.values[ny - 1 :]
            vals[1:ny, 0] = side_l
            vals[1:ny, nx] = side_r
            # corners shared with a Neumann horizontal edge take the side
            # data's closure value
            if self.pattern[GAMMA1] != "dirichlet":
                vals[0, 0] = _extrapolate_corner(side_l)
                vals[0, nx] = _extrapolate_corner(side_r)
            if self.pattern[GAMMA2] != "dirichlet":
                vals[ny, 0] = _extrapolate_corner(side_l[::-1])
                vals[ny, nx] = _extrapolate_corner(side_r[::-1])
        return vals

    def solve(self,
              dirichlet: Mapping[BoundaryPart, TraceFn | None] | None = None,
              neumann: Mapping[BoundaryPart, TraceFn | None] | None = None,
              f: Field | None = None) -> Field:
        """Solve for the given boundary data; missing traces mean zero."""
        g = self.grid
        nx, ny = g.nx, g.ny
        dirichlet = dirichlet or {}
        neumann = neumann or {}

        b = np.zeros((ny + 1, nx + 1))
        if f is not None:
            b += f.values * self._area

        for edge, part in _EDGES.items():
            if self.pattern[part] != "neumann":
                continue
            q = _edge_data(g, edge, neumann.get(part))
            seg = self._seg[edge]
            if edge == "bottom":
                b[0, :] += q * seg
            elif edge == "top":
                b[ny, :] += q * seg
            elif edge == "left":
                b[:, 0] += q * seg
            else:
                b[:, nx] += q * seg

        u_d = self._dirichlet_values(dirichlet).ravel()[self._constrained]
        rhs = b.ravel()[self._free] - self._A_fd @ u_d
        x = self._lu.solve(rhs)

        res = np.linalg.norm(self._A_ff @ x - rhs)
        if res > SOLVER_RTOL * max(np.linalg.norm(rhs), 1.0):
            raise SolverError(f"linear solve residual {res:.3e} exceeds tolerance")

        u = np.empty((ny + 1) * (nx + 1))
        u[self._free] = x
        u[self._constrained] = u_d
        return Field(g, u.reshape(ny + 1, nx + 1))


def solve_mixed_bvp(spec: BvpSpec) -> Field:
    """One-shot solve of a mixed boundary-value problem."""
    pattern = {
        part: "dirichlet" if isinstance(bc, Dirichlet) else "neumann"
        for part, bc in spec.bcs.items()
    }
    solver = MixedSolver(spec.grid, spec.coefficient, pattern)
    dirichlet = {p: bc.trace for p, bc in spec.bcs.items() if isinstance(bc, Dirichlet)}
    neumann = {p: bc.trace for p, bc in spec.bcs.items() if isinstance(bc, Neumann)}
    return solver.solve(dirichlet=dirichlet, neumann=neumann, f=spec.f)


def neumann_trace(u: Field, a: Coefficient, part: BoundaryPart) -> TraceFn:
    """Outward conormal derivative a*du/dnu on a part, one-sided 3-point formula.

    The derivative is differenced along the inward normal and negated, so the
    result is second-order consistent at every node of the part. Only call
    this on parts where u was not given Neumann data; there the imposed data
    is already the exact answer.
    """
    g = u.grid
    v = u.values
    if part is GAMMA1:
        d_in = (-3.0 * v[0, :] + 4.0 * v[1, :] - v[2, :]) / (2.0 * g.hy)
        vals = -a(g.xs, 0.0) * d_in
    elif part is GAMMA2:
        d_in = (-3.0 * v[-1, :] + 4.0 * v[-2, :] - v[-3, :]) / (2.0 * g.hy)
        vals = -a(g.xs, g.height) * d_in
    else:
        ys = np.arange(1, g.ny) * g.hy
        d_l = (-3.0 * v[1:-1, 0] + 4.0 * v[1:-1, 1] - v[1:-1, 2]) / (2.0 * g.hx)
        d_r = (-3.0 * v[1:-1, -1] + 4.0 * v[1:-1, -2] - v[1:-1, -3]) / (2.0 * g.hx)
        vals = np.concatenate([-a(0.0, ys) * d_l, -a(g.width, ys) * d_r])
    return TraceFn(g, part, vals)
