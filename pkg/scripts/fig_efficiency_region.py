#!/usr/bin/env python3
"""Violation region in the (r, eta) plane plus threshold-efficiency curves.

Produces the grid of optimized Bell values over squeezing and detector
efficiency for a few dimensions, and a small table of bisected threshold
efficiencies.  The CSV ``violated`` column delineates the region boundary.

Usage:
    python3 scripts/fig_efficiency_region.py [outdir]
"""

import pathlib
import sys

from phasebell import BellKind, OptimizerConfig, bound_efficiency
from phasebell.cli import run
from phasebell.scenario import EfficiencyMode


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    outdir.mkdir(parents=True, exist_ok=True)

    for d in (2, 3, 10):
        out = outdir / f"region_cglmp_d{d}.csv"
        code = run([
            "region",
            "--kind", "cglmp",
            "--d", str(d),
            "--r-start", "0.05", "--r-stop", "1.0", "--r-step", "0.05",
            "--eta-start", "0.5", "--eta-stop", "1.0", "--eta-step", "0.025",
            "--mode", "symmetric",
            "--starts", "6",
            "--out", str(out),
        ])
        if code != 0:
            return code
        print(f"wrote {out}", file=sys.stderr)

    cfg = OptimizerConfig(starts=6, seed=42)
    table = outdir / "thresholds_cglmp.csv"
    with open(table, "w") as fh:
        print("d,r,mode,eta_threshold", file=fh)
        for d in (2, 3, 10):
            for mode in (EfficiencyMode.SYMMETRIC, EfficiencyMode.ASYMMETRIC):
                eta = bound_efficiency(BellKind.CGLMP, d, 0.02, mode,
                                       eta_tol=1e-3, cfg=cfg)
                print(f"{d},0.02,{mode.value},{eta:.4f}", file=fh)
    print(f"wrote {table}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
