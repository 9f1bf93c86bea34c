#!/usr/bin/env python3
"""Grid-refinement study of the mixed solver on a separable harmonic field."""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cauchyls import (GAMMA1, GAMMA2, GAMMA3, BvpSpec, Coefficient, Dirichlet,
                      Neumann, build_grid, neumann_trace, solve_mixed_bvp,
                      trace_from_function, zero_trace)


def errors(nx: int, height: float) -> tuple[float, float]:
    g = build_grid(1.0, height, nx)
    top = trace_from_function(
        g, GAMMA2, lambda x: np.pi * np.sin(np.pi * x) * np.cosh(np.pi * height))
    side = trace_from_function(g, GAMMA3, lambda s: -np.pi * np.sinh(np.pi * s))
    spec = BvpSpec(grid=g, coefficient=Coefficient(), f=None,
                   bcs={GAMMA1: Dirichlet(zero_trace(g, GAMMA1)),
                        GAMMA2: Neumann(top), GAMMA3: Neumann(side)})
    u = solve_mixed_bvp(spec)
    x, y = np.meshgrid(g.xs, g.ys)
    interior = np.abs(u.values - np.sin(np.pi * x) * np.sinh(np.pi * y)).max()
    flux = neumann_trace(u, spec.coefficient, GAMMA1)
    trace_err = np.abs(flux.values + np.pi * np.sin(np.pi * g.xs)).max()
    return interior, trace_err


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--height", type=float, default=0.5)
    parser.add_argument("--levels", type=int, nargs="+",
                        default=[16, 32, 64, 128])
    args = parser.parse_args()

    print(f"{'nx':<6}{'interior max':<16}{'order':<8}"
          f"{'flux trace max':<16}{'order':<8}")
    prev = None
    for nx in args.levels:
        i, t = errors(nx, args.height)
        oi = f"{np.log2(prev[0] / i):.2f}" if prev else "-"
        ot = f"{np.log2(prev[1] / t):.2f}" if prev else "-"
        print(f"{nx:<6}{i:<16.4e}{oi:<8}{t:<16.4e}{ot:<8}")
        prev = (i, t)
    return 0


if __name__ == "__main__":
    sys.exit(main())
