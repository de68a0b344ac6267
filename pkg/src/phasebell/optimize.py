"""Maximization of Bell values over displacement settings, and efficiency thresholds.

Derivative-free simplex search with seeded multistart; the objective is smooth,
cheap and low-dimensional, so nothing fancier is warranted.  Threshold
efficiencies come from bisection on a violation predicate whose monotonicity is
checked by a coarse pre-scan rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bell_core import BellEvaluator, bell_value
from .scenario import (
    BellKind,
    DetectorModel,
    EfficiencyMode,
    IDEAL_DETECTORS,
    MeasurementSettings,
)

#: a Bell value must clear the local bound by this margin to count as a violation
VIOLATION_MARGIN = 1e-7

LOCAL_BOUND = 2.0


class NoViolationError(RuntimeError):
    """No violation at unit efficiency, so no threshold efficiency exists."""


class NonMonotoneViolationError(RuntimeError):
    """The violation predicate is not monotone in efficiency; bisection aborted."""

    def __init__(self, message: str, scan):
        super().__init__(message)
        self.scan = scan


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 32
    seed: int = 42
    max_iters: int = 4000
    simplex_tol: float = 1e-9
    box_halfwidth: float = 1.5
    restrict_real: bool = False

    def __post_init__(self) -> None:
        if self.starts < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if self.simplex_tol <= 0:
            raise ValueError(f"simplex_tol must be positive, got {self.simplex_tol}")
        if self.box_halfwidth <= 0:
            raise ValueError(f"box_halfwidth must be positive, got {self.box_halfwidth}")


@dataclass(frozen=True)
class OptimizationResult:
    best_value: float
    best_settings: MeasurementSettings
    starts_converged: int
    evaluations: int


def _start_points(cfg: OptimizerConfig, dim: int) -> list[np.ndarray]:
    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(dim), np.full(dim, 0.1)]
    starts += [rng.uniform(-cfg.box_halfwidth, cfg.box_halfwidth, dim) for _ in range(cfg.starts)]
    return starts


def maximize_bell(
    kind: BellKind,
    d: int,
    r,
    det: DetectorModel = IDEAL_DETECTORS,
    cfg: OptimizerConfig = OptimizerConfig(),
    initial: MeasurementSettings | None = None,
) -> OptimizationResult:
    """Best Bell value over the four displacement settings.

    Nelder-Mead from ``cfg.starts`` seeded random points plus the all-zero and
    near-zero deterministic starts; fully reproducible for a given (cfg, seed).
    ``initial`` adds one warm start, useful for chaining along a parameter
    sweep so neighbouring points land on the same branch.
    """
    evaluator = BellEvaluator(kind, d, r, det, restrict_real=cfg.restrict_real)
    evals = 0

    def negative(x):
        nonlocal evals
        evals += 1
        return -evaluator.value_from_x(x)

    starts = _start_points(cfg, evaluator.dim)
    if initial is not None:
        x0 = initial.as_array()
        starts.insert(0, x0[0::2] if cfg.restrict_real else x0)

    best_x = None
    best = -math.inf
    converged = 0
    for x0 in starts:
        res = minimize(
            negative,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iters,
                "fatol": cfg.simplex_tol,
                "xatol": 1e-7,
            },
        )
        if res.success:
            converged += 1
        # ties resolved toward the earlier start for determinism
        if -res.fun > best:
            best = -res.fun
            best_x = res.x
    if converged == 0:
        raise RuntimeError("no simplex start converged; raise max_iters or simplex_tol")

    settings = evaluator.settings_from_x(best_x)
    # cross-check the vectorized evaluator against the scalar closed-form
    # path; the two accumulate rounding differently, hence the loose 1e-9
    recomputed = bell_value(kind, settings, r, d, det)
    if abs(recomputed - best) > 1e-9:
        raise RuntimeError(
            f"post-hoc re-evaluation disagrees with optimizer value: {recomputed} vs {best}"
        )
    return OptimizationResult(
        best_value=best,
        best_settings=settings,
        starts_converged=converged,
        evaluations=evals,
    )


def _detectors_for(mode: EfficiencyMode, eta: float) -> DetectorModel:
    if EfficiencyMode(mode) is EfficiencyMode.SYMMETRIC:
        return DetectorModel(eta, eta)
    return DetectorModel(1.0, eta)


def bound_efficiency(
    kind: BellKind,
    d: int,
    r,
    mode: EfficiencyMode = EfficiencyMode.SYMMETRIC,
    eta_tol: float = 1e-3,
    cfg: OptimizerConfig = OptimizerConfig(),
) -> float:
    """Threshold efficiency below which the optimized Bell value stops violating.

    A 16-point pre-scan validates that the violation predicate is monotone in
    eta before bisection refines the threshold to width ``eta_tol``.
    """
    if eta_tol <= 0:
        raise ValueError(f"eta_tol must be positive, got {eta_tol}")

    def violates(eta: float) -> bool:
        value = maximize_bell(kind, d, r, _detectors_for(mode, eta), cfg).best_value
        return value > LOCAL_BOUND + VIOLATION_MARGIN

    grid = [i / 16 for i in range(1, 17)]
    scan = [(eta, violates(eta)) for eta in grid]
    if not scan[-1][1]:
        raise NoViolationError(
            f"no violation at unit efficiency for kind={kind}, d={d}, r={r}"
        )
    flags = [v for _, v in scan]
    # once the predicate turns on it must stay on
    if any(a and not b for a, b in zip(flags, flags[1:])):
        raise NonMonotoneViolationError(
            f"violation region not monotone in eta for kind={kind}, d={d}, r={r}", scan
        )
    lo = max((eta for eta, v in scan if not v), default=grid[0] / 2)
    hi = min(eta for eta, v in scan if v)
    while hi - lo > eta_tol:
        mid = 0.5 * (lo + hi)
        if violates(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
