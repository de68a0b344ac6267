"""Bell functional values for the two-mode squeezed state."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasebell import (
    BellEvaluator,
    BellKind,
    DetectorModel,
    MeasurementSettings,
    bell_value,
    cglmp_value,
    slk_value,
)

coords = st.floats(min_value=-1.0, max_value=1.0)
squeezings = st.floats(min_value=0.0, max_value=2.0)
etas = st.floats(min_value=0.3, max_value=1.0)


def _settings_from(vals):
    return MeasurementSettings.from_array(np.asarray(vals, dtype=float))


class TestZeroSettings:
    """All displacements at the origin: every correlation equals 1, so the
    value is the sum of all coefficients, which is exactly the local bound."""

    @pytest.mark.parametrize("kind", [BellKind.CGLMP, BellKind.SLK])
    @pytest.mark.parametrize("d", [2, 3, 5, 10])
    def test_value_is_two(self, kind, d):
        value = bell_value(kind, MeasurementSettings.zero(), 0.8, d)
        assert value == pytest.approx(2.0, abs=1e-12)


class TestDimensionTwoCollapse:
    @settings(max_examples=60)
    @given(st.lists(coords, min_size=8, max_size=8), squeezings)
    def test_cglmp_equals_slk_ideal(self, vals, r):
        s = _settings_from(vals)
        assert cglmp_value(s, r, 2) == pytest.approx(slk_value(s, r, 2), abs=1e-12)

    @settings(max_examples=40)
    @given(st.lists(coords, min_size=8, max_size=8), squeezings, etas, etas)
    def test_cglmp_equals_slk_lossy(self, vals, r, ea, eb):
        s = _settings_from(vals)
        det = DetectorModel(ea, eb)
        assert cglmp_value(s, r, 2, det) == pytest.approx(
            slk_value(s, r, 2, det), abs=1e-12
        )


class TestEvaluatorAgreesWithScalarPath:
    @settings(max_examples=40)
    @given(st.lists(coords, min_size=8, max_size=8), squeezings,
           st.integers(min_value=2, max_value=6),
           st.sampled_from([BellKind.CGLMP, BellKind.SLK]))
    def test_ideal(self, vals, r, d, kind):
        s = _settings_from(vals)
        ev = BellEvaluator(kind, d, r)
        assert ev.value(s) == pytest.approx(bell_value(kind, s, r, d), abs=1e-11)

    @settings(max_examples=40)
    @given(st.lists(coords, min_size=8, max_size=8), squeezings,
           st.integers(min_value=2, max_value=6), etas, etas,
           st.sampled_from([BellKind.CGLMP, BellKind.SLK]))
    def test_lossy(self, vals, r, d, ea, eb, kind):
        s = _settings_from(vals)
        det = DetectorModel(ea, eb)
        ev = BellEvaluator(kind, d, r, det)
        assert ev.value(s) == pytest.approx(bell_value(kind, s, r, d, det), abs=1e-11)


class TestRestrictReal:
    def test_real_slice_matches_full_parameterization(self):
        ev4 = BellEvaluator(BellKind.CGLMP, 3, 1.0, restrict_real=True)
        ev8 = BellEvaluator(BellKind.CGLMP, 3, 1.0)
        x4 = np.array([0.2, -0.4, 0.1, 0.3])
        x8 = np.zeros(8)
        x8[0::2] = x4
        assert ev4.dim == 4 and ev8.dim == 8
        assert ev4.value_from_x(x4) == pytest.approx(ev8.value_from_x(x8), abs=1e-14)


def test_known_chsh_style_point():
    # a hand-picked d = 2 point that violates the local bound
    s = _settings_from([0.064, 0.008, -0.199, -0.026, -0.199, 0.026, 0.064, -0.008])
    v = cglmp_value(s, 1.0, 2)
    assert v > 2.3
