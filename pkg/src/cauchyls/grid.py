"""Rectangular grids, boundary bookkeeping and trace transfer.

The domain is the open strip (0, width) x (0, height), discretized with a
uniform node-centered grid. The boundary splits into three named parts:
the bottom edge (where Cauchy data lives), the top edge (where the unknown
flux lives) and the two lateral sides. Corner nodes are owned by the
horizontal edges so that every boundary node belongs to exactly one part.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np


class BoundaryPart(Enum):
    """Named parts of the rectangle boundary.

    GAMMA1 is the bottom edge y = 0 (accessible, both traces known),
    GAMMA2 the top edge y = height (inaccessible, flux unknown),
    GAMMA3 the two vertical sides (homogeneous flux).
    """

    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA3 = "gamma3"


GAMMA1 = BoundaryPart.GAMMA1
GAMMA2 = BoundaryPart.GAMMA2
GAMMA3 = BoundaryPart.GAMMA3


@dataclass(frozen=True)
class Grid:
    """Uniform node-centered grid with nodes (i*hx, j*hy), 0<=i<=nx, 0<=j<=ny."""

    width: float
    height: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("grid dimensions must be positive")
        if self.nx < 4 or self.ny < 4:
            raise ValueError("need nx >= 4 and ny >= 4")

    @property
    def hx(self) -> float:
        return self.width / self.nx

    @property
    def hy(self) -> float:
        return self.height / self.ny

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.width, self.nx + 1)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(0.0, self.height, self.ny + 1)

    def node_count(self, part: BoundaryPart) -> int:
        if part in (GAMMA1, GAMMA2):
            return self.nx + 1
        return 2 * (self.ny - 1)


def build_grid(width: float, height: float, nx: int, ny: int | None = None) -> Grid:
    """Construct a grid; ny defaults to the isotropic choice round(nx*height/width)."""
    if ny is None:
        ny = int(round(nx * height / width))
    return Grid(width=float(width), height=float(height), nx=int(nx), ny=int(ny))


def boundary_nodes(grid: Grid, part: BoundaryPart) -> np.ndarray:
    """(i, j) index pairs of the nodes owned by a boundary part.

    Horizontal parts own their corners and are ordered by increasing x.
    The sides exclude all four corners; ordering is left side bottom to top,
    then right side bottom to top.
    """
    if part is GAMMA1:
        i = np.arange(grid.nx + 1)
        return np.stack([i, np.zeros_like(i)], axis=1)
    if part is GAMMA2:
        i = np.arange(grid.nx + 1)
        return np.stack([i, np.full_like(i, grid.ny)], axis=1)
    j = np.arange(1, grid.ny)
    left = np.stack([np.zeros_like(j), j], axis=1)
    right = np.stack([np.full_like(j, grid.nx), j], axis=1)
    return np.concatenate([left, right], axis=0)


@dataclass(frozen=True)
class TraceFn:
    """Nodal values of a scalar function on one boundary part."""

    grid: Grid
    part: BoundaryPart
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size != self.grid.node_count(self.part):
            raise ValueError(
                f"trace on {self.part.value} needs "
                f"{self.grid.node_count(self.part)} values, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("trace values must be finite")

    @property
    def coords(self) -> np.ndarray:
        """Arc coordinate of each node along its segment."""
        if self.part in (GAMMA1, GAMMA2):
            return self.grid.xs
        j = np.arange(1, self.grid.ny) * self.grid.hy
        return np.concatenate([j, j])

    def with_values(self, values: np.ndarray) -> "TraceFn":
        return TraceFn(self.grid, self.part, values)


def trace_from_function(grid: Grid, part: BoundaryPart, fn: Callable) -> TraceFn:
    """Sample fn(arc coordinate) at the part's nodes."""
    coords = TraceFn(grid, part, np.zeros(grid.node_count(part))).coords
    return TraceFn(grid, part, np.asarray(fn(coords), dtype=float))


def zero_trace(grid: Grid, part: BoundaryPart) -> TraceFn:
    return TraceFn(grid, part, np.zeros(grid.node_count(part)))


def quadrature_weights(grid: Grid, part: BoundaryPart) -> np.ndarray:
    """Arc-length quadrature weights: trapezoid rule with h/2 end weights.

    Side nodes carry plain weight hy; the corner half-cells there belong to
    the horizontal edges.
    """
    if part in (GAMMA1, GAMMA2):
        w = np.full(grid.nx + 1, grid.hx)
        w[0] = w[-1] = 0.5 * grid.hx
        return w
    return np.full(2 * (grid.ny - 1), grid.hy)


def _check_nested(fine: Grid, coarse: Grid) -> tuple[int, int]:
    if (fine.width, fine.height) != (coarse.width, coarse.height):
        raise ValueError("grids cover different rectangles")
    if fine.nx % coarse.nx or fine.ny % coarse.ny:
        raise ValueError("fine grid is not nested in the coarse grid")
    return fine.nx // coarse.nx, fine.ny // coarse.ny


def restrict_trace(t: TraceFn, coarse: Grid) -> TraceFn:
    """Injection of a fine-grid trace onto a nested coarse grid (no smoothing)."""
    kx, ky = _check_nested(t.grid, coarse)
    if t.part in (GAMMA1, GAMMA2):
        return TraceFn(coarse, t.part, t.values[::kx].copy())
    nf, nc = t.grid.ny, coarse.ny
    j = np.arange(1, nc) * ky  # fine side index of each coarse side node
    left, right = t.values[: nf - 1], t.values[nf - 1 :]
    return TraceFn(coarse, t.part, np.concatenate([left[j - 1], right[j - 1]]))


def prolong_trace(t: TraceFn, fine: Grid) -> TraceFn:
    """Linear interpolation of a coarse trace onto a nested fine grid.

    Restricting the result recovers the coarse trace exactly.
    """
    kx, ky = _check_nested(fine, t.grid)
    if t.part in (GAMMA1, GAMMA2):
        vals = np.interp(fine.xs, t.grid.xs, t.values)
        return TraceFn(fine, t.part, vals)
    # sides: interpolate in y per side, extending flat past the end nodes
    yc = np.arange(1, t.grid.ny) * t.grid.hy
    yf = np.arange(1, fine.ny) * fine.hy
    nc = t.grid.ny
    left = np.interp(yf, yc, t.values[: nc - 1])
    right = np.interp(yf, yc, t.values[nc - 1 :])
    return TraceFn(fine, t.part, np.concatenate([left, right]))
