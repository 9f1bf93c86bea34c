#!/usr/bin/env python3
"""Run the built-in experiments and print one summary line per run.

Outputs land under the configured run directories (see
CAUCHYLS_OUTPUT_ROOT to relocate them).
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cauchyls.experiments import (EXPERIMENT_NAMES, EXP2_REL_RESIDUAL,
                                  exp2_config, iterations_to_relative_residual,
                                  run_exp1, run_exp2, run_exp3)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", default=list(EXPERIMENT_NAMES),
                        help="experiments to run (default: all)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output root directory")
    args = parser.parse_args()

    for name in args.names or EXPERIMENT_NAMES:
        t0 = time.time()
        if name == "exp1":
            record, _ = run_exp1(args.out)
            comps = record.components
            first2 = comps.index(2) if 2 in comps else None
            print(f"exp1: stop {record.stop_reason}@{record.stop_iteration}, "
                  f"split at iter {first2}, final error {record.errors[-1]:.4f}, "
                  f"{time.time() - t0:.1f}s")
        elif name == "exp2":
            records, setups, counts = run_exp2(args.out)
            print(f"exp2: iters to {EXP2_REL_RESIDUAL:g}*||rhs||: "
                  f"h=0.5 {counts[0.5]}, h=1.0 {counts[1.0]}, "
                  f"{time.time() - t0:.1f}s")
        elif name == "exp3":
            record, setup = run_exp3(args.out)
            print(f"exp3: stop {record.stop_reason}@{record.stop_iteration}, "
                  f"residual {record.residuals[-1]:.4f} "
                  f"(tau*delta {setup.cfg.tau * setup.data.delta:.4f}), "
                  f"error {record.errors[-1]:.4f}, {time.time() - t0:.1f}s")
        else:
            print(f"unknown experiment {name!r}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
