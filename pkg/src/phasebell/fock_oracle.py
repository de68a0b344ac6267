"""Brute-force photon-number oracle for the closed-form TMSS correlations.

Builds truncated joint photon-count distributions of a displaced two-mode
squeezed vacuum, pushes them through the binomial detector-loss model, and
recomputes correlations and Bell values directly from the count statistics.
Everything here is deliberately independent of the closed forms in
:mod:`phasebell.bell_core` so the two layers can cross-validate each other.

Phase convention: the closed-form correlation corresponds to the squeezing
phase for which the characteristic function carries a +sinh(2r) cross term.
With the all-positive number-basis amplitudes used here, that convention is
realized by projecting Alice with D(-alpha) and Bob with D(+beta); the flip of
Bob's sign is a local phase-space rotation by pi with no physical content.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre
from scipy.stats import binom

from .bell_core import PAIRS, cglmp_epsilon, slk_epsilon_table
from .scenario import (
    BellKind,
    DetectorModel,
    MeasurementSettings,
    check_dimension,
    check_order,
    require_finite,
)

#: largest detected-count cutoff the cutoff search is allowed to request
MAX_K_MAX = 600

#: largest index admitted by the scalar overlap before the guard trips
OVERLAP_INDEX_LIMIT = 10_000


@dataclass(frozen=True)
class FockCutoff:
    """Truncation of the photon-pair index (j_max) and detected counts (k_max)."""

    j_max: int
    k_max: int

    def __post_init__(self) -> None:
        if self.j_max < 0:
            raise ValueError(f"j_max must be >= 0, got {self.j_max}")
        if self.k_max < self.j_max:
            raise ValueError(f"k_max ({self.k_max}) must be >= j_max ({self.j_max})")


@dataclass(frozen=True)
class JointPhotonDistribution:
    """Truncated table P[k, l] of joint photon-count probabilities."""

    table: np.ndarray
    cutoff: FockCutoff
    tail_bound: float

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 2:
            raise ValueError("table must be two-dimensional")
        if table.min() < -1e-15:
            raise ValueError(f"negative probability in table: {table.min()}")
        mass = table.sum()
        if mass > 1 + 1e-12:
            raise ValueError(f"total probability exceeds 1: {mass}")
        if 1 - mass > self.tail_bound + 1e-12:
            raise ValueError(
                f"missing mass {1 - mass:.3e} exceeds claimed tail bound {self.tail_bound:.3e}"
            )
        object.__setattr__(self, "table", table)

    @property
    def mass(self) -> float:
        return float(self.table.sum())


def tmss_amplitude(j: int, r) -> float:
    """Number-basis amplitude tanh(r)^j / cosh(r) of the photon pair |j, j>."""
    if int(j) != j or j < 0:
        raise ValueError(f"pair index must be a non-negative integer, got {j!r}")
    rr = r.r if hasattr(r, "r") else float(r)
    if rr < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {rr}")
    return math.tanh(rr) ** j / math.cosh(rr)


def displaced_fock_overlap(m: int, j: int, alpha: complex) -> complex:
    """Matrix element <m|D(alpha)|j> with D(alpha) = exp(alpha a+ - alpha* a).

    Evaluated through the associated-Laguerre closed form with the factorial
    ratio and power in log space, so large indices cannot overflow.
    """
    if int(m) != m or int(j) != j or m < 0 or j < 0:
        raise ValueError(f"indices must be non-negative integers, got m={m!r}, j={j!r}")
    if m + j > OVERLAP_INDEX_LIMIT:
        raise OverflowError(f"overlap indices m+j={m + j} beyond safe limit {OVERLAP_INDEX_LIMIT}")
    alpha = require_finite(alpha, "alpha")
    if alpha == 0:
        return 1.0 + 0j if m == j else 0j
    aa = abs(alpha) ** 2
    if m >= j:
        k = m - j
        log_mag = 0.5 * (math.lgamma(j + 1) - math.lgamma(m + 1)) + k * math.log(abs(alpha)) - aa / 2
        phase = cmath.exp(1j * k * cmath.phase(alpha))
        lag = eval_genlaguerre(j, k, aa)
    else:
        k = j - m
        log_mag = 0.5 * (math.lgamma(m + 1) - math.lgamma(j + 1)) + k * math.log(abs(alpha)) - aa / 2
        phase = cmath.exp(1j * k * cmath.phase(-alpha.conjugate()))
        lag = eval_genlaguerre(m, k, aa)
    return math.exp(log_mag) * phase * lag


def displacement_matrix(alpha: complex, m_max: int, j_max: int) -> np.ndarray:
    """Dense block <m|D(alpha)|j> for m <= m_max, j <= j_max.

    Built by the two-term recurrence in m at fixed j, seeded from the closed
    first row <0|D(alpha)|j> = (-alpha*)^j e^(-|alpha|^2/2)/sqrt(j!); an
    O(m*j) construction with no factorials.
    """
    alpha = require_finite(alpha, "alpha")
    d = np.zeros((m_max + 1, j_max + 1), dtype=complex)
    j = np.arange(1, j_max + 1)
    row0 = np.empty(j_max + 1, dtype=complex)
    row0[0] = math.exp(-abs(alpha) ** 2 / 2)
    if j_max:
        row0[1:] = row0[0] * np.cumprod(-np.conj(alpha) / np.sqrt(j))
    d[0] = row0
    sqrt_j = np.sqrt(np.arange(j_max + 1))
    for m in range(m_max):
        shifted = np.empty(j_max + 1, dtype=complex)
        shifted[0] = 0
        shifted[1:] = sqrt_j[1:] * d[m, :-1]
        d[m + 1] = (alpha * d[m] + shifted) / math.sqrt(m + 1)
    return d


def joint_photon_distribution(
    alpha: complex, beta: complex, r, cutoff: FockCutoff
) -> JointPhotonDistribution:
    """Joint count distribution of the TMSS displaced by (alpha, beta)."""
    alpha = require_finite(alpha, "alpha")
    beta = require_finite(beta, "beta")
    amps = np.array([tmss_amplitude(j, r) for j in range(cutoff.j_max + 1)])
    da = displacement_matrix(-alpha, cutoff.k_max, cutoff.j_max)
    db = displacement_matrix(beta, cutoff.k_max, cutoff.j_max)  # see module docstring
    psi = (da * amps) @ db.T
    table = np.abs(psi) ** 2
    tail = max(0.0, 1.0 - float(table.sum()))
    return JointPhotonDistribution(table=table, cutoff=cutoff, tail_bound=tail)


def _thinning_matrix(eta: float, size: int) -> np.ndarray:
    m, k = np.indices((size, size))
    return binom.pmf(m, k, eta)


def apply_bernoulli_loss(dist: JointPhotonDistribution, det: DetectorModel) -> JointPhotonDistribution:
    """Push the distribution through independent binomial photon loss per mode."""
    size = dist.table.shape[0]
    ba = _thinning_matrix(det.eta_a, size)
    bb = _thinning_matrix(det.eta_b, dist.table.shape[1])
    table = ba @ dist.table @ bb.T
    return JointPhotonDistribution(table=table, cutoff=dist.cutoff, tail_bound=dist.tail_bound)


def oracle_correlation(n: int, d: int, dist: JointPhotonDistribution) -> complex:
    """Correlation sum omega^(n(k-l)) P[k, l] over the truncated table."""
    n = check_order(n, d)
    w = cmath.exp(2j * math.pi * n / d)
    wk = np.power(w, np.arange(dist.table.shape[0]))
    wl = np.power(w.conjugate(), np.arange(dist.table.shape[1]))
    return complex(wk @ dist.table @ wl)


def lossy_correlation_via_weights(
    n: int, d: int, ideal: JointPhotonDistribution, det: DetectorModel
) -> complex:
    """Lossy correlation evaluated as modified weights on the ideal distribution.

    Summing (1 - eta + eta*omega^n)^k (1 - eta + eta*omega^-n)^l against the
    loss-free counts is the closed consequence of the Bernoulli model; it must
    agree with thinning the distribution first.
    """
    n = check_order(n, d)
    w = cmath.exp(2j * math.pi * n / d)
    za = 1 - det.eta_a + det.eta_a * w
    zb = 1 - det.eta_b + det.eta_b * w.conjugate()
    zk = np.power(za, np.arange(ideal.table.shape[0]))
    zl = np.power(zb, np.arange(ideal.table.shape[1]))
    return complex(zk @ ideal.table @ zl)


def oracle_correlation_lossy(
    n: int, d: int, ideal: JointPhotonDistribution, det: DetectorModel
) -> complex:
    """Lossy correlation via thinning, cross-asserted against the weight path."""
    thinned = oracle_correlation(n, d, apply_bernoulli_loss(ideal, det))
    weighted = lossy_correlation_via_weights(n, d, ideal, det)
    if abs(thinned - weighted) > 1e-12:
        raise RuntimeError(
            f"loss-path mismatch: thinning gives {thinned}, weights give {weighted}"
        )
    return thinned


def residue_binned(dist: JointPhotonDistribution, d: int) -> np.ndarray:
    """Collapse the count table to the d x d table of residues modulo d."""
    check_dimension(d)
    q = np.zeros((d, d))
    for kp in range(d):
        for lp in range(d):
            q[kp, lp] = dist.table[kp::d, lp::d].sum()
    return q


def _difference_marginal(q: np.ndarray, d: int) -> np.ndarray:
    """Mass at each residue difference m = (k' - l') mod d."""
    t = np.zeros(d)
    for kp in range(d):
        for lp in range(d):
            t[(kp - lp) % d] += q[kp, lp]
    return t


def oracle_bell_from_probs(kind: BellKind, d: int, dists) -> float:
    """Bell value from four binned joint distributions, via outcome coefficients.

    ``dists`` holds the distributions for setting pairs (1,1), (1,2), (2,1),
    (2,2) in that order.  This is the joint-probability form of the functional
    and must agree with the correlation form up to truncation error.
    """
    kind = BellKind(kind)
    check_dimension(d)
    dists = list(dists)
    if len(dists) != 4:
        raise ValueError(f"need the four setting-pair distributions, got {len(dists)}")
    if kind is BellKind.CGLMP:
        eps = np.array(
            [[cglmp_epsilon(a, b, m, 0, d) for m in range(d)] for (a, b) in PAIRS]
        )
    else:
        eps = slk_epsilon_table(d)
    total = 0.0
    for p, dist in enumerate(dists):
        t = _difference_marginal(residue_binned(dist, d), d)
        total += float(eps[p] @ t)
    return total


def choose_cutoff(r, settings: MeasurementSettings, tol: float) -> FockCutoff:
    """Pick truncation indices so the oracle is accurate to about ``tol``.

    j_max comes from the geometric tail of the squeezed-vacuum amplitudes;
    k_max starts from j_max plus a displaced-count margin and is grown until
    doubling it moves a probe correlation by no more than ``tol``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    rr = r.r if hasattr(r, "r") else float(r)
    if rr == 0:
        j_max = 0
    else:
        t = math.tanh(rr)
        j_max = max(0, math.ceil(math.log(tol / 2) / (2 * math.log(t))))
    disp = max(abs(z) for z in (settings.alpha1, settings.alpha2, settings.beta1, settings.beta2))
    k_max = j_max + math.ceil(disp**2 + 6 * disp + 10)

    # adaptive check on the most oscillatory probe (n=1, d=2) at the largest
    # displacements: doubling k_max must not move the answer by more than tol
    alpha = max((settings.alpha1, settings.alpha2), key=abs)
    beta = max((settings.beta1, settings.beta2), key=abs)
    while True:
        if k_max > MAX_K_MAX:
            raise ValueError(
                f"tolerance {tol} needs k_max > {MAX_K_MAX}; not reachable safely"
            )
        c1 = oracle_correlation(1, 2, joint_photon_distribution(alpha, beta, rr, FockCutoff(j_max, k_max)))
        c2 = oracle_correlation(1, 2, joint_photon_distribution(alpha, beta, rr, FockCutoff(j_max, 2 * k_max)))
        if abs(c1 - c2) <= tol:
            return FockCutoff(j_max, k_max)
        k_max *= 2
