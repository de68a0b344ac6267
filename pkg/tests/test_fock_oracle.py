"""Photon-number oracle: displaced overlaps, loss model, and cross-validation
against the closed-form correlations."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.stats import poisson

from phasebell import (
    BellKind,
    DetectorModel,
    FockCutoff,
    IDEAL_DETECTORS,
    MeasurementSettings,
    apply_bernoulli_loss,
    choose_cutoff,
    corr_tmss,
    corr_tmss_lossy,
    displaced_fock_overlap,
    displacement_matrix,
    joint_photon_distribution,
    oracle_bell_from_probs,
    oracle_correlation,
    oracle_correlation_lossy,
    tmss_amplitude,
)
from phasebell import bell_value

amplitudes = st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False)
squeezings = st.floats(min_value=0.0, max_value=1.2)


def _overlap_via_expm(m: int, j: int, alpha: complex, dim: int = 60) -> complex:
    """Independent route: literally exponentiate alpha a+ - alpha* a."""
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    gen = alpha * a.conj().T - np.conjugate(alpha) * a
    return expm(gen)[m, j]


class TestTmssAmplitude:
    def test_examples(self):
        assert tmss_amplitude(0, 0.0) == 1.0
        assert tmss_amplitude(0, 1.0) == pytest.approx(1 / math.cosh(1.0))
        assert tmss_amplitude(3, 0.5) == pytest.approx(math.tanh(0.5) ** 3 / math.cosh(0.5))

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            tmss_amplitude(-1, 0.5)
        with pytest.raises(ValueError):
            tmss_amplitude(2, -0.1)

    @given(squeezings, st.integers(min_value=0, max_value=40))
    def test_geometric_tail(self, r, jmax):
        # sum of |amplitude|^2 up to J leaves exactly tanh(r)^(2(J+1)) of mass
        head = sum(tmss_amplitude(j, r) ** 2 for j in range(jmax + 1))
        assert 1 - head == pytest.approx(math.tanh(r) ** (2 * (jmax + 1)), abs=1e-12)


class TestDisplacedOverlap:
    def test_vacuum_column(self):
        alpha = 0.4 - 0.3j
        g = math.exp(-abs(alpha) ** 2 / 2)
        assert displaced_fock_overlap(0, 0, alpha) == pytest.approx(g)
        assert displaced_fock_overlap(1, 0, alpha) == pytest.approx(alpha * g)
        assert displaced_fock_overlap(0, 1, alpha) == pytest.approx(-np.conj(alpha) * g)

    def test_zero_displacement_is_identity(self):
        assert displaced_fock_overlap(3, 3, 0j) == 1.0
        assert displaced_fock_overlap(3, 2, 0j) == 0j

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12),
           amplitudes)
    def test_matches_matrix_exponential(self, m, j, alpha):
        assert displaced_fock_overlap(m, j, alpha) == pytest.approx(
            _overlap_via_expm(m, j, alpha), abs=1e-10
        )

    def test_index_guard(self):
        with pytest.raises(OverflowError):
            displaced_fock_overlap(9000, 2000, 0.5)
        with pytest.raises(ValueError):
            displaced_fock_overlap(-1, 0, 0.5)


class TestDisplacementMatrix:
    @settings(max_examples=20, deadline=None)
    @given(amplitudes)
    def test_matches_scalar_overlap(self, alpha):
        mat = displacement_matrix(alpha, 6, 5)
        for m in range(7):
            for j in range(6):
                assert mat[m, j] == pytest.approx(
                    displaced_fock_overlap(m, j, alpha), abs=1e-12
                )

    def test_columns_are_normalized(self):
        # D is unitary, so truncated columns approach unit norm for small alpha
        mat = displacement_matrix(0.3 + 0.2j, 40, 5)
        norms = np.linalg.norm(mat, axis=0)
        assert norms == pytest.approx(np.ones(6), abs=1e-12)


class TestJointDistribution:
    def test_undisplaced_is_diagonal_geometric(self):
        r = 0.7
        dist = joint_photon_distribution(0j, 0j, r, FockCutoff(30, 30))
        t2, c2 = math.tanh(r) ** 2, math.cosh(r) ** 2
        for k in range(6):
            assert dist.table[k, k] == pytest.approx(t2**k / c2)
        off = dist.table - np.diag(np.diag(dist.table))
        assert abs(off).max() < 1e-30

    def test_vacuum_displaced_is_product_of_poissons(self):
        alpha, beta = 0.6, -0.4 + 0.2j
        dist = joint_photon_distribution(alpha, beta, 0.0, FockCutoff(0, 25))
        k = np.arange(26)
        pk = poisson.pmf(k, abs(alpha) ** 2)
        pl = poisson.pmf(k, abs(beta) ** 2)
        np.testing.assert_allclose(dist.table, np.outer(pk, pl), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(amplitudes, amplitudes, squeezings)
    def test_mass_is_conserved(self, alpha, beta, r):
        cut = choose_cutoff(r, MeasurementSettings(alpha, alpha, beta, beta), 1e-10)
        dist = joint_photon_distribution(alpha, beta, r, cut)
        assert dist.mass <= 1 + 1e-12
        assert 1 - dist.mass <= 1e-8


class TestBernoulliLoss:
    def test_identity_at_unit_efficiency(self):
        dist = joint_photon_distribution(0.3, -0.2j, 0.5, FockCutoff(20, 30))
        lossy = apply_bernoulli_loss(dist, IDEAL_DETECTORS)
        assert lossy.table == pytest.approx(dist.table, abs=1e-15)

    def test_single_pair_splits_binomially(self):
        table = np.zeros((2, 2))
        table[1, 0] = 1.0
        dist = JointPhotonDistributionFactory(table)
        lossy = apply_bernoulli_loss(dist, DetectorModel(0.7, 1.0))
        assert lossy.table[1, 0] == pytest.approx(0.7)
        assert lossy.table[0, 0] == pytest.approx(0.3)


def JointPhotonDistributionFactory(table):
    from phasebell.fock_oracle import JointPhotonDistribution

    return JointPhotonDistribution(
        table=table, cutoff=FockCutoff(0, table.shape[0] - 1), tail_bound=0.0
    )


class TestOracleAgainstClosedForms:
    def test_reference_point_ideal(self):
        cut = FockCutoff(40, 80)
        dist = joint_photon_distribution(0.3, -0.3, 0.5, cut)
        assert oracle_correlation(1, 2, dist) == pytest.approx(
            0.8759584691447599, abs=1e-10
        )

    def test_reference_point_lossy(self):
        cut = FockCutoff(40, 80)
        dist = joint_photon_distribution(0j, 0j, 0.5, cut)
        got = oracle_correlation_lossy(1, 2, dist, DetectorModel(0.5, 0.5))
        assert got == pytest.approx(0.7864477329659274, abs=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(amplitudes, amplitudes, squeezings,
           st.integers(min_value=2, max_value=6))
    def test_ideal_correlations_match(self, alpha, beta, r, d):
        cut = choose_cutoff(r, MeasurementSettings(alpha, alpha, beta, beta), 1e-10)
        dist = joint_photon_distribution(alpha, beta, r, cut)
        for n in range(1, d):
            assert oracle_correlation(n, d, dist) == pytest.approx(
                corr_tmss(n, alpha, beta, r, d), abs=1e-8
            )

    @settings(max_examples=15, deadline=None)
    @given(amplitudes, amplitudes, squeezings,
           st.integers(min_value=2, max_value=5),
           st.floats(min_value=0.4, max_value=1.0),
           st.floats(min_value=0.4, max_value=1.0))
    def test_lossy_correlations_match(self, alpha, beta, r, d, ea, eb):
        det = DetectorModel(ea, eb)
        cut = choose_cutoff(r, MeasurementSettings(alpha, alpha, beta, beta), 1e-10)
        dist = joint_photon_distribution(alpha, beta, r, cut)
        for n in range(1, d):
            assert oracle_correlation_lossy(n, d, dist, det) == pytest.approx(
                corr_tmss_lossy(n, alpha, beta, r, d, det), abs=1e-8
            )


class TestBellFromProbabilities:
    @pytest.mark.parametrize("kind", [BellKind.CGLMP, BellKind.SLK])
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_agrees_with_correlation_form(self, kind, d):
        s = MeasurementSettings(0.15 + 0.05j, -0.2, 0.1j, -0.12 - 0.08j)
        r = 0.9
        cut = choose_cutoff(r, s, 1e-10)
        dists = [
            joint_photon_distribution(a, b, r, cut)
            for a, b in (
                (s.alpha1, s.beta1),
                (s.alpha1, s.beta2),
                (s.alpha2, s.beta1),
                (s.alpha2, s.beta2),
            )
        ]
        assert oracle_bell_from_probs(kind, d, dists) == pytest.approx(
            bell_value(kind, s, r, d), abs=1e-6
        )


class TestChooseCutoff:
    def test_vacuum_needs_single_pair_index(self):
        cut = choose_cutoff(0.0, MeasurementSettings.zero(), 1e-12)
        assert cut.j_max == 0

    def test_reference_cutoff(self):
        cut = choose_cutoff(1.0, MeasurementSettings.zero(), 1e-12)
        # smallest J with tanh(1)^(2J) below tol/2
        assert cut.j_max == 53
        assert math.tanh(1.0) ** (2 * cut.j_max) < 1e-12 / 2
        assert math.tanh(1.0) ** (2 * (cut.j_max - 1)) > 1e-12 / 2

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            choose_cutoff(0.5, MeasurementSettings.zero(), 0.0)
