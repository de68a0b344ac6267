#!/usr/bin/env python3
"""Optimized Bell value versus squeezing for several dimensions.

Emits one CSV per functional (CGLMP and SLK) with rows for every (d, r) grid
point, suitable for plotting violation-versus-squeezing curves.  Equivalent to
running the ``sweep-r`` subcommand twice; kept as a script so the figure data
can be regenerated with one command.

Usage:
    python3 scripts/fig_dimension_sweep.py [outdir]
"""

import pathlib
import sys

from phasebell.cli import run


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    outdir.mkdir(parents=True, exist_ok=True)
    for kind in ("cglmp", "slk"):
        out = outdir / f"sweep_{kind}.csv"
        code = run([
            "sweep-r",
            "--kind", kind,
            "--d-list", "2,3,4,5,6,8,10",
            "--r-start", "0.1", "--r-stop", "3.0", "--r-step", "0.1",
            "--starts", "8",
            "--out", str(out),
        ])
        if code != 0:
            return code
        print(f"wrote {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
