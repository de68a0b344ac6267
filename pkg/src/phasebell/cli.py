"""Command-line front end: evaluate, optimize, sweep, and verify.

Sweep subcommands emit CSV with one row per grid point so figure data can be
regenerated and plotted externally; all output is deterministic for a fixed
seed and independent of the parallelism degree.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import re
import sys
from dataclasses import dataclass

from .optimize import (
    NonMonotoneViolationError,
    NoViolationError,
    OptimizerConfig,
    VIOLATION_MARGIN,
    bound_efficiency,
    maximize_bell,
)
from .bell_core import bell_value, corr_tmss, corr_tmss_lossy
from .scenario import BellKind, DetectorModel, EfficiencyMode, MeasurementSettings
from .verify import run_suite

CSV_HEADER = (
    "kind,d,r,eta_a,eta_b,bell_value,violated,"
    "a1_re,a1_im,a2_re,a2_im,b1_re,b1_im,b2_re,b2_im,evals"
)

_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_RE_REAL = re.compile(rf"({_NUM})")
_RE_IMAG = re.compile(rf"({_NUM}|[-+]?)i")
_RE_BOTH = re.compile(rf"({_NUM})([-+](?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?|[-+])i")


def parse_complex(text: str) -> complex:
    """Parse a displacement literal like "0.3", "-0.1+0.2i" or "1i"."""
    text = text.strip()
    if m := _RE_BOTH.fullmatch(text):
        im = m.group(2)
        return complex(float(m.group(1)), float(im if im not in "+-" else im + "1"))
    if m := _RE_IMAG.fullmatch(text):
        im = m.group(1)
        return complex(0.0, float(im if im not in ("", "+", "-") else im + "1"))
    if m := _RE_REAL.fullmatch(text):
        return complex(float(m.group(1)), 0.0)
    raise argparse.ArgumentTypeError(f"malformed complex literal: {text!r}")


@dataclass(frozen=True)
class AxisSpec:
    """Inclusive start:stop:step grid axis; points are start + i*step by index."""

    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.start > self.stop:
            raise ValueError(f"start {self.start} exceeds stop {self.stop}")

    def points(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class SweepRow:
    kind: BellKind
    d: int
    r: float
    eta_a: float
    eta_b: float
    bell_value: float
    violated: bool
    settings: MeasurementSettings
    evaluations: int

    def to_csv(self) -> str:
        g = lambda v: format(v, ".17g")
        s = self.settings
        fields = [
            self.kind.value, str(self.d), g(self.r), g(self.eta_a), g(self.eta_b),
            g(self.bell_value), "true" if self.violated else "false",
            g(s.alpha1.real), g(s.alpha1.imag), g(s.alpha2.real), g(s.alpha2.imag),
            g(s.beta1.real), g(s.beta1.imag), g(s.beta2.real), g(s.beta2.imag),
            str(self.evaluations),
        ]
        return ",".join(fields)


def emit_csv(rows, destination) -> None:
    """Write header plus one line per row; destination is a path or a stream."""
    out = destination
    close = False
    if isinstance(destination, (str, os.PathLike)):
        try:
            out = open(destination, "w")
        except OSError as exc:
            raise RuntimeError(f"cannot write {destination}: {exc}") from exc
        close = True
    try:
        print(CSV_HEADER, file=out)
        for row in rows:
            print(row.to_csv(), file=out)
    finally:
        if close:
            out.close()


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _optimize_point(task) -> SweepRow:
    kind, d, r, eta_a, eta_b, cfg = task
    det = DetectorModel(eta_a, eta_b)
    res = maximize_bell(kind, d, r, det, cfg)
    return SweepRow(
        kind=kind, d=d, r=r, eta_a=eta_a, eta_b=eta_b,
        bell_value=res.best_value,
        violated=res.best_value > 2.0 + VIOLATION_MARGIN,
        settings=res.best_settings,
        evaluations=res.evaluations,
    )


def _run_tasks(tasks, threads: int):
    if threads <= 1 or len(tasks) <= 1:
        return [_optimize_point(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_optimize_point, tasks))


def _settings_from_args(args) -> MeasurementSettings:
    return MeasurementSettings(args.a1, args.a2, args.b1, args.b2)


def _detectors_from_args(args) -> DetectorModel:
    return DetectorModel(args.eta_a, args.eta_b)


def _config_from_args(args, restrict_real: bool = False) -> OptimizerConfig:
    return OptimizerConfig(starts=args.starts, seed=args.seed, restrict_real=restrict_real)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="RNG seed for multistart")
    common.add_argument("--starts", type=int, default=32, help="random multistart count")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="parallel workers for grid evaluation")
    common.add_argument("--tol", type=float, default=1e-8,
                        help="oracle cross-check tolerance")

    parser = argparse.ArgumentParser(
        prog="phasebell",
        description="Phase-space CGLMP/SLK Bell tests for two-mode squeezed vacuum",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, kind_flag=True, detectors=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if kind_flag:
            p.add_argument("--kind", type=BellKind, choices=list(BellKind), default=BellKind.CGLMP)
        if detectors:
            p.add_argument("--eta-a", type=float, default=1.0)
            p.add_argument("--eta-b", type=float, default=1.0)
        return p

    p = add("corr", "print one closed-form correlation value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha", type=parse_complex, required=True)
    p.add_argument("--beta", type=parse_complex, required=True)

    p = add("bell", "print one Bell value at explicit settings")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    for flag in ("--a1", "--a2", "--b1", "--b2"):
        p.add_argument(flag, type=parse_complex, required=True)

    p = add("optimize", "maximize the Bell value over settings; print one CSV row")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--restrict-real", action="store_true")

    p = add("sweep-r", "optimized Bell value per (d, r) grid point, as CSV")
    p.add_argument("--d-list", type=str, required=True, help="comma-separated dimensions")
    p.add_argument("--r-start", type=float, required=True)
    p.add_argument("--r-stop", type=float, required=True)
    p.add_argument("--r-step", type=float, required=True)
    p.add_argument("--out", type=str, default=None)

    p = add("region", "optimized Bell value per (r, eta) grid point, as CSV",
            detectors=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r-start", type=float, required=True)
    p.add_argument("--r-stop", type=float, required=True)
    p.add_argument("--r-step", type=float, required=True)
    p.add_argument("--eta-start", type=float, required=True)
    p.add_argument("--eta-stop", type=float, required=True)
    p.add_argument("--eta-step", type=float, required=True)
    p.add_argument("--mode", type=EfficiencyMode, choices=list(EfficiencyMode),
                   default=EfficiencyMode.SYMMETRIC)
    p.add_argument("--out", type=str, default=None)

    p = add("bound-eta", "threshold detection efficiency by bisection", detectors=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--mode", type=EfficiencyMode, choices=list(EfficiencyMode),
                   default=EfficiencyMode.SYMMETRIC)
    p.add_argument("--eta-tol", type=float, default=1e-3)

    p = add("verify", "run a named cross-validation suite", kind_flag=False,
            detectors=False)
    p.add_argument("--suite", type=str, default="all",
                   choices=["oracle", "classical-bound", "fourier", "identities", "all"])
    p.add_argument("--cases", type=int, default=100,
                   help="randomized case count for the oracle suite")

    return parser


def _cmd_corr(args) -> int:
    det = _detectors_from_args(args)
    if det.ideal:
        value = corr_tmss(args.n, args.alpha, args.beta, args.r, args.d)
    else:
        value = corr_tmss_lossy(args.n, args.alpha, args.beta, args.r, args.d, det)
    print(_format_complex(value))
    return 0


def _cmd_bell(args) -> int:
    value = bell_value(args.kind, _settings_from_args(args), args.r, args.d,
                       _detectors_from_args(args))
    print(repr(value))
    return 0


def _cmd_optimize(args) -> int:
    row = _optimize_point(
        (args.kind, args.d, args.r, args.eta_a, args.eta_b,
         _config_from_args(args, args.restrict_real))
    )
    emit_csv([row], sys.stdout)
    return 0


def _cmd_sweep_r(args) -> int:
    d_list = [int(tok) for tok in args.d_list.split(",") if tok]
    axis = AxisSpec(args.r_start, args.r_stop, args.r_step)
    cfg = _config_from_args(args)
    tasks = [
        (args.kind, d, r, args.eta_a, args.eta_b, cfg)
        for d in d_list
        for r in axis.points()
    ]
    rows = _run_tasks(tasks, args.threads)
    emit_csv(rows, args.out if args.out else sys.stdout)
    return 0


def _cmd_region(args) -> int:
    r_axis = AxisSpec(args.r_start, args.r_stop, args.r_step)
    eta_axis = AxisSpec(args.eta_start, args.eta_stop, args.eta_step)
    cfg = _config_from_args(args)
    symmetric = args.mode is EfficiencyMode.SYMMETRIC
    tasks = [
        (args.kind, args.d, r, eta if symmetric else 1.0, eta, cfg)
        for r in r_axis.points()
        for eta in eta_axis.points()
    ]
    rows = _run_tasks(tasks, args.threads)
    emit_csv(rows, args.out if args.out else sys.stdout)
    return 0


def _cmd_bound_eta(args) -> int:
    eta = bound_efficiency(args.kind, args.d, args.r, args.mode, args.eta_tol,
                           _config_from_args(args))
    print(repr(eta))
    return 0


def _cmd_verify(args) -> int:
    kwargs = {}
    if args.suite == "oracle":
        kwargs = {"cases": args.cases, "tol": args.tol, "seed": args.seed}
    elif args.suite == "identities":
        kwargs = {"seed": args.seed}
    results = run_suite(args.suite, **kwargs)
    failed = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
        failed += not check.passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


_COMMANDS = {
    "corr": _cmd_corr,
    "bell": _cmd_bell,
    "optimize": _cmd_optimize,
    "sweep-r": _cmd_sweep_r,
    "region": _cmd_region,
    "bound-eta": _cmd_bound_eta,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, NoViolationError, NonMonotoneViolationError,
            RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
