"""Multistart simplex search and threshold-efficiency bisection."""

import pytest

from phasebell import (
    BellKind,
    DetectorModel,
    OptimizerConfig,
    bound_efficiency,
    maximize_bell,
)
from phasebell.bell_core import bell_value
from phasebell.optimize import NoViolationError
from phasebell.scenario import EfficiencyMode

FAST = OptimizerConfig(starts=4, seed=7)


class TestMaximizeBell:
    def test_reproducible(self):
        a = maximize_bell(BellKind.CGLMP, 3, 1.0, cfg=FAST)
        b = maximize_bell(BellKind.CGLMP, 3, 1.0, cfg=FAST)
        assert a.best_value == b.best_value
        assert a.best_settings == b.best_settings
        assert a.evaluations == b.evaluations

    def test_seed_only_changes_search_not_physics(self):
        a = maximize_bell(BellKind.CGLMP, 2, 1.0, cfg=OptimizerConfig(starts=6, seed=1))
        b = maximize_bell(BellKind.CGLMP, 2, 1.0, cfg=OptimizerConfig(starts=6, seed=2))
        assert a.best_value == pytest.approx(b.best_value, abs=1e-6)

    def test_returned_value_is_attained(self):
        res = maximize_bell(BellKind.SLK, 3, 0.8, cfg=FAST)
        recomputed = bell_value(BellKind.SLK, res.best_settings, 0.8, 3)
        assert recomputed == pytest.approx(res.best_value, abs=1e-12)

    def test_unsqueezed_state_cannot_violate(self):
        res = maximize_bell(BellKind.CGLMP, 2, 0.0, cfg=FAST)
        assert res.best_value == pytest.approx(2.0, abs=1e-6)

    def test_squeezing_enables_violation(self):
        res = maximize_bell(BellKind.CGLMP, 2, 1.0, cfg=FAST)
        assert res.best_value > 2.2

    def test_real_restriction_reaches_same_optimum(self):
        full = maximize_bell(BellKind.CGLMP, 2, 1.0, cfg=FAST)
        real = maximize_bell(
            BellKind.CGLMP, 2, 1.0, cfg=OptimizerConfig(starts=4, seed=7, restrict_real=True)
        )
        # the optimum admits a real representative (overall phase gauge)
        assert real.best_value == pytest.approx(full.best_value, abs=1e-6)

    def test_warm_start_recovers_optimum_with_single_start(self):
        good = maximize_bell(BellKind.CGLMP, 3, 1.0, cfg=FAST)
        warm = maximize_bell(
            BellKind.CGLMP, 3, 1.1,
            cfg=OptimizerConfig(starts=1, seed=0),
            initial=good.best_settings,
        )
        cold = maximize_bell(BellKind.CGLMP, 3, 1.1, cfg=FAST)
        assert warm.best_value == pytest.approx(cold.best_value, abs=1e-6)

    def test_loss_degrades_the_optimum(self):
        ideal = maximize_bell(BellKind.CGLMP, 2, 1.0, cfg=FAST)
        lossy = maximize_bell(BellKind.CGLMP, 2, 1.0, DetectorModel(0.8, 0.8), cfg=FAST)
        assert lossy.best_value < ideal.best_value

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(starts=0)
        with pytest.raises(ValueError):
            OptimizerConfig(simplex_tol=0.0)


class TestBoundEfficiency:
    def test_symmetric_threshold_small_squeezing(self):
        eta = bound_efficiency(
            BellKind.CGLMP, 2, 0.02, EfficiencyMode.SYMMETRIC, eta_tol=2e-3, cfg=FAST
        )
        assert 0.66 <= eta <= 0.68

    def test_asymmetric_below_symmetric(self):
        sym = bound_efficiency(
            BellKind.CGLMP, 2, 0.02, EfficiencyMode.SYMMETRIC, eta_tol=5e-3, cfg=FAST
        )
        asym = bound_efficiency(
            BellKind.CGLMP, 2, 0.02, EfficiencyMode.ASYMMETRIC, eta_tol=5e-3, cfg=FAST
        )
        assert asym < sym

    def test_no_violation_raises(self):
        with pytest.raises(NoViolationError):
            bound_efficiency(BellKind.CGLMP, 2, 0.0, cfg=FAST)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            bound_efficiency(BellKind.CGLMP, 2, 0.5, eta_tol=-1.0, cfg=FAST)
