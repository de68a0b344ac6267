"""Domain types shared by the closed-form, oracle and optimizer layers.

Complex amplitudes (displacements, correlation values, order parameters) are
plain Python ``complex`` numbers throughout; every constructor rejects NaN and
infinite components.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np


class BellKind(str, Enum):
    """Which d-outcome Bell functional is being evaluated."""

    CGLMP = "cglmp"
    SLK = "slk"


class EfficiencyMode(str, Enum):
    """How detector inefficiency is distributed between the two parties."""

    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


def require_finite(value: complex, name: str) -> complex:
    z = complex(value)
    if not cmath.isfinite(z):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


def check_dimension(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"outcome dimension must be an integer >= 2, got {d!r}")
    return int(d)


def check_order(n: int, d: int) -> int:
    """Validate a correlation order n against dimension d.

    Orders are taken modulo d by periodicity; multiples of d are rejected
    because the corresponding weight degenerates to a constant.
    """
    check_dimension(d)
    if int(n) != n or n < 1:
        raise ValueError(f"correlation order must be a positive integer, got {n!r}")
    if n % d == 0:
        raise ValueError(f"correlation order {n} is a multiple of d={d}")
    return int(n)


@dataclass(frozen=True)
class BellScenario:
    kind: BellKind
    d: int

    def __post_init__(self) -> None:
        check_dimension(self.d)


@dataclass(frozen=True)
class MeasurementSettings:
    """The four local displacement settings, two per party."""

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            object.__setattr__(self, name, require_finite(getattr(self, name), name))

    def as_array(self) -> np.ndarray:
        """Flatten to 8 reals (re/im interleaved, alphas first)."""
        return np.array(
            [
                self.alpha1.real, self.alpha1.imag,
                self.alpha2.real, self.alpha2.imag,
                self.beta1.real, self.beta1.imag,
                self.beta2.real, self.beta2.imag,
            ]
        )

    @classmethod
    def from_array(cls, x) -> "MeasurementSettings":
        x = np.asarray(x, dtype=float)
        if x.shape == (4,):
            # real-restricted coordinates
            return cls(x[0], x[1], x[2], x[3])
        if x.shape != (8,):
            raise ValueError(f"expected 4 or 8 coordinates, got shape {x.shape}")
        return cls(
            complex(x[0], x[1]),
            complex(x[2], x[3]),
            complex(x[4], x[5]),
            complex(x[6], x[7]),
        )

    @classmethod
    def zero(cls) -> "MeasurementSettings":
        return cls(0j, 0j, 0j, 0j)


@dataclass(frozen=True)
class TmssParams:
    """Two-mode squeezed vacuum squeezing parameter."""

    r: float

    def __post_init__(self) -> None:
        r = float(require_finite(self.r, "r").real)
        if r < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {r}")
        object.__setattr__(self, "r", r)


@dataclass(frozen=True)
class DetectorModel:
    """Per-party detection efficiencies in (0, 1]."""

    eta_a: float = 1.0
    eta_b: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta_a", "eta_b"):
            eta = float(require_finite(getattr(self, name), name).real)
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eta}")
            object.__setattr__(self, name, eta)

    @property
    def ideal(self) -> bool:
        return self.eta_a == 1.0 and self.eta_b == 1.0


IDEAL_DETECTORS = DetectorModel(1.0, 1.0)
