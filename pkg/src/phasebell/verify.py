"""Named cross-validation suites tying the closed forms to their oracles.

Each suite returns a list of check results; the CLI ``verify`` subcommand
prints one line per check and fails the process if anything fails.  These are
the same checks the test suite runs, packaged for standalone execution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import bell_core, fock_oracle
from .bell_core import (
    BellKind,
    classical_bound_enumeration,
    corr_tmss,
    corr_tmss_lossy,
    correlation_weight,
    cglmp_value,
    order_parameter,
    quasiprob_tmss,
    slk_value,
)
from .fock_oracle import (
    FockCutoff,
    apply_bernoulli_loss,
    choose_cutoff,
    joint_photon_distribution,
    lossy_correlation_via_weights,
    oracle_bell_from_probs,
    oracle_correlation,
)
from .scenario import DetectorModel, IDEAL_DETECTORS, MeasurementSettings


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, worst: float, tol: float, extra: str = "") -> CheckResult:
    detail = f"max deviation {worst:.3e} (tol {tol:.1e})" + (f"; {extra}" if extra else "")
    return CheckResult(name, worst <= tol, detail)


def _random_case(rng):
    d = int(rng.integers(2, 7))
    n = int(rng.integers(1, d))
    r = float(rng.uniform(0.0, 1.5))
    alpha = complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85))
    beta = complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85))
    return d, n, r, alpha, beta


def identity_checks(seed: int = 42, samples: int = 200) -> list[CheckResult]:
    """Algebraic identities of weights, closed forms and functionals."""
    rng = np.random.default_rng(seed)
    w_c1 = w_c2 = w_c3 = w_per = 0.0
    w_eq13 = w_eq17 = w_lossy = w_conj = w_bound = w_collapse = w_imag = w_gauge = 0.0
    for _ in range(samples):
        d, n, r, alpha, beta = _random_case(rng)
        k = int(rng.integers(0, 3 * d))
        l = int(rng.integers(0, 3 * d))
        gamma = int(rng.integers(0, 2 * d))

        # weight conditions C1-C3 and periodicity in the order
        w_c1 = max(w_c1, abs(sum(correlation_weight(kk, l, n, d) for kk in range(d))))
        w_c1 = max(w_c1, abs(sum(correlation_weight(k, ll, n, d) for ll in range(d))))
        w_c2 = max(
            w_c2,
            abs(correlation_weight(k + gamma, l + gamma, n, d) - correlation_weight(k, l, n, d)),
        )
        w_c3 = max(
            w_c3,
            abs(
                abs(correlation_weight(k + 1, l, n, d) - correlation_weight(k, l, n, d))
                - abs(correlation_weight(k, l + 1, n, d) - correlation_weight(k, l, n, d))
            ),
        )
        w_per = max(
            w_per,
            abs(correlation_weight(k, l, n + d * int(rng.integers(1, 4)), d)
                - correlation_weight(k, l, n, d)),
        )

        # proportionality between the correlation and the quasiprobability
        s = order_parameter(n, d)
        c = corr_tmss(n, alpha, beta, r, d)
        q = quasiprob_tmss(alpha, beta, r, s)
        w_eq13 = max(w_eq13, abs(c - math.pi**2 * (1 - s * s) / 4 * q) / abs(c))
        if d == 2:
            w_eq17 = max(w_eq17, abs(c - math.pi**2 / 4 * quasiprob_tmss(alpha, beta, r, 0j)))

        det = DetectorModel(float(rng.uniform(0.3, 1.0)), float(rng.uniform(0.3, 1.0)))
        w_lossy = max(
            w_lossy,
            abs(corr_tmss_lossy(n, alpha, beta, r, d, IDEAL_DETECTORS) - c),
        )
        w_conj = max(
            w_conj,
            abs(corr_tmss(d - n, alpha, beta, r, d) - c.conjugate()),
            abs(
                corr_tmss_lossy(d - n, alpha, beta, r, d, det)
                - corr_tmss_lossy(n, alpha, beta, r, d, det).conjugate()
            ),
        )
        w_bound = max(
            w_bound,
            abs(c) - 1.0,
            abs(corr_tmss_lossy(n, alpha, beta, r, d, det)) - 1.0,
        )

        settings = MeasurementSettings(
            alpha,
            complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85)),
            beta,
            complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85)),
        )
        chsh = (
            corr_tmss(1, settings.alpha1, settings.beta1, r, 2)
            + corr_tmss(1, settings.alpha1, settings.beta2, r, 2)
            - corr_tmss(1, settings.alpha2, settings.beta1, r, 2)
            + corr_tmss(1, settings.alpha2, settings.beta2, r, 2)
        )
        cg2 = cglmp_value(settings, r, 2)
        sl2 = slk_value(settings, r, 2)
        w_collapse = max(w_collapse, abs(cg2 - sl2), abs(cg2 - chsh.real), abs(chsh.imag))

        # bell values are real by construction; the evaluators raise beyond
        # IMAG_TOL, so reaching this point already certifies the bound
        cglmp_value(settings, r, d, det)
        slk_value(settings, r, d, det)

        phi = float(rng.uniform(0, 2 * math.pi))
        g = cmath.exp(1j * phi)
        rotated = MeasurementSettings(
            settings.alpha1 * g, settings.alpha2 * g,
            settings.beta1 / g, settings.beta2 / g,
        )
        w_gauge = max(w_gauge, abs(cglmp_value(rotated, r, d) - cglmp_value(settings, r, d)))

    return [
        _result("weight condition C1 (row/column sums vanish)", w_c1, 1e-12),
        _result("weight condition C2 (translation invariance)", w_c2, 1e-12),
        _result("weight condition C3 (uniform spacing)", w_c3, 1e-12),
        _result("weight periodicity in the order", w_per, 1e-12),
        _result("correlation ~ quasiprobability proportionality", w_eq13, 1e-12),
        _result("d=2 Wigner reduction", w_eq17, 1e-12),
        _result("unit-efficiency reduction of lossy correlation", w_lossy, 1e-12),
        _result("conjugate symmetry C(d-n) = C(n)*", w_conj, 1e-12),
        _result("correlation modulus bounded by 1", w_bound, 1e-12),
        _result("d=2 collapse to CHSH", w_collapse, 1e-12),
        _result("Bell value imaginary part", w_imag, bell_core.IMAG_TOL),
        _result("phase gauge invariance", w_gauge, 1e-12),
    ]


def classical_bound_checks() -> list[CheckResult]:
    """Deterministic-strategy bounds of both functionals equal 2."""
    out = []
    for kind in (BellKind.CGLMP, BellKind.SLK):
        for d in (2, 3, 4, 5):
            bound = classical_bound_enumeration(kind, d)
            out.append(
                _result(f"classical bound {kind.value} d={d}", abs(bound - 2.0), 1e-9)
            )
    return out


def oracle_checks(seed: int = 42, cases: int = 100, tol: float = 1e-8) -> list[CheckResult]:
    """Closed forms against the truncated photon-number oracle."""
    rng = np.random.default_rng(seed)
    etas = [1.0, 0.7, 0.4]
    w_corr = w_paths = w_mass = w_unit = w_vac = 0.0
    for i in range(cases):
        d = int(rng.integers(2, 7))
        n = int(rng.integers(1, d))
        r = float(rng.uniform(0.0, 1.5))
        alpha = complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85))
        beta = complex(rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85))
        eta = etas[i % len(etas)]
        det = DetectorModel(eta, eta)
        settings = MeasurementSettings(alpha, 0j, beta, 0j)
        # truncation must sit well below the comparison tolerance: the cutoff
        # probe bounds only one correlation order, not the worst one
        cutoff = choose_cutoff(r, settings, 1e-12)
        dist = joint_photon_distribution(alpha, beta, r, cutoff)

        if det.ideal:
            closed = corr_tmss(n, alpha, beta, r, d)
            numeric = oracle_correlation(n, d, dist)
        else:
            closed = corr_tmss_lossy(n, alpha, beta, r, d, det)
            thinned = apply_bernoulli_loss(dist, det)
            numeric = oracle_correlation(n, d, thinned)
            w_paths = max(
                w_paths,
                abs(numeric - lossy_correlation_via_weights(n, d, dist, det)),
            )
            w_mass = max(w_mass, abs(thinned.mass - dist.mass))
        w_corr = max(w_corr, abs(closed - numeric))

        if i % 10 == 0:
            mat = fock_oracle.displacement_matrix(alpha, cutoff.k_max, min(cutoff.j_max, 20))
            cols = np.sum(np.abs(mat) ** 2, axis=0)
            w_unit = max(w_unit, float(np.max(np.abs(cols - 1.0))))
            w = cmath.exp(2j * math.pi * n / d)
            vac = joint_photon_distribution(alpha, beta, 0.0, FockCutoff(0, cutoff.k_max))
            expected = cmath.exp(abs(alpha) ** 2 * (w - 1) + abs(beta) ** 2 * (w.conjugate() - 1))
            w_vac = max(w_vac, abs(oracle_correlation(n, d, vac) - expected))

    # joint-probability form against the correlation form
    w_forms = 0.0
    for kind in (BellKind.CGLMP, BellKind.SLK):
        for d in (2, 3):
            r = float(rng.uniform(0.2, 1.0))
            coords = rng.uniform(-0.6, 0.6, 8)
            settings = MeasurementSettings.from_array(coords)
            cutoff = choose_cutoff(r, settings, 1e-10)
            pairs = (
                (settings.alpha1, settings.beta1),
                (settings.alpha1, settings.beta2),
                (settings.alpha2, settings.beta1),
                (settings.alpha2, settings.beta2),
            )
            dists = [joint_photon_distribution(a, b, r, cutoff) for a, b in pairs]
            numeric = oracle_bell_from_probs(kind, d, dists)
            closed = bell_core.bell_value(kind, settings, r, d)
            w_forms = max(w_forms, abs(numeric - closed))

    return [
        _result(f"closed form vs oracle correlation ({cases} cases)", w_corr, tol),
        _result("thinning path vs weight path", w_paths, 1e-12),
        _result("loss preserves probability mass", w_mass, 1e-15),
        _result("displacement matrix column unitarity", w_unit, 1e-9),
        _result("vacuum factorization at r=0", w_vac, 1e-10),
        _result("joint-probability form vs correlation form", w_forms, 1e-6),
    ]


def fourier_checks(grid_points: int = 40, half_width: float = 6.0) -> list[CheckResult]:
    """Numeric Fourier inversion of the characteristic function (slow).

    Transforms the closed characteristic function on a truncated trapezoidal
    grid in all four phase-space coordinates and compares against the closed
    quasiprobability at small squeezing.
    """
    r, d, n = 0.2, 3, 1
    s = order_parameter(n, d)
    c2, s2 = math.cosh(2 * r), math.sinh(2 * r)
    axis = np.linspace(-half_width, half_width, grid_points)
    h = axis[1] - axis[0]
    x, y = np.meshgrid(axis, axis, indexing="ij")
    zeta = (x + 1j * y).ravel()

    ma = c2 - s
    mb = c2 - s.conjugate()
    kernel = np.exp(-s2 * np.real(np.outer(zeta, zeta)))

    worst = 0.0
    for alpha, beta in [(0j, 0j), (0.3 + 0.2j, -0.4j), (0.5, 0.5), (-0.2 + 0.1j, 0.3 - 0.3j)]:
        a_vec = np.exp(-0.5 * ma * np.abs(zeta) ** 2 + alpha * np.conj(zeta) - np.conj(alpha) * zeta)
        b_vec = np.exp(-0.5 * mb * np.abs(zeta) ** 2 + beta * np.conj(zeta) - np.conj(beta) * zeta)
        numeric = (h**4 / math.pi**4) * (a_vec @ kernel @ b_vec)
        closed = quasiprob_tmss(alpha, beta, r, s)
        worst = max(worst, abs(numeric - closed))
    return [_result("characteristic-function inversion", worst, 1e-3)]


SUITES = {
    "identities": identity_checks,
    "classical-bound": classical_bound_checks,
    "oracle": oracle_checks,
    "fourier": fourier_checks,
}

#: suites included in ``verify --suite all`` (fourier excluded: slow)
DEFAULT_SUITES = ("oracle", "classical-bound", "identities")


def run_suite(name: str, **kwargs) -> list[CheckResult]:
    if name == "all":
        results = []
        for suite in DEFAULT_SUITES:
            results.extend(SUITES[suite]())
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](**kwargs)
