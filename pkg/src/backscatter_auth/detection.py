"""Threshold design, the accept/reject test, and its closed-form error rates.

Under the legitimate hypothesis the test statistic T = |estimate - enrolled
fingerprint| is Rayleigh with per-component scale sqrt(v/2), where v is the
complex estimation-error variance; under an attack it is Rician with
noncentrality equal to the fingerprint distance.  Note the scale is the
square root of half the complex variance, not the half-variance itself;
the Monte Carlo validation suite pins this convention down.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .estimation import FingerprintEstimate
from .special import RiceParams, rayleigh_tail, rice_cdf


def fingerprint_distance(value, ground_truth):
    """Test statistic |value - ground_truth|.

    Evaluated as sqrt(re^2 + im^2) from elementary correctly-rounded ops, so
    the scalar decision path and the vectorized Monte Carlo kernel produce
    bit-identical statistics.  Accepts complex scalars or arrays.
    """
    d = value - ground_truth
    return np.sqrt(d.real * d.real + d.imag * d.imag)


def design_threshold(target_pfa: float, est_variance: float) -> float:
    """Decision threshold sqrt(-ln(target_pfa) * est_variance); false-alarm
    rate of the resulting test equals target_pfa exactly."""
    if not (0.0 < target_pfa < 1.0):
        raise ParameterError(f"target_pfa must lie in (0, 1), got {target_pfa!r}")
    if not math.isfinite(est_variance) or est_variance <= 0.0:
        raise ParameterError(f"est_variance must be > 0, got {est_variance!r}")
    return math.sqrt(-math.log(target_pfa) * est_variance)


def analytic_pfa(threshold: float, est_variance: float) -> float:
    """False-alarm probability exp(-threshold^2 / est_variance)."""
    if not math.isfinite(est_variance) or est_variance <= 0.0:
        raise ParameterError(f"est_variance must be > 0, got {est_variance!r}")
    return rayleigh_tail(threshold, math.sqrt(est_variance / 2.0))


def analytic_pmd(mu_mag: float, threshold: float, est_variance: float) -> float:
    """Missed-detection probability 1 - Q1(mu/s, threshold/s), s = sqrt(v/2)."""
    if not math.isfinite(est_variance) or est_variance <= 0.0:
        raise ParameterError(f"est_variance must be > 0, got {est_variance!r}")
    s = math.sqrt(est_variance / 2.0)
    return rice_cdf(threshold, RiceParams(nu=mu_mag, sigma=s))


@dataclass(frozen=True)
class DetectorConfig:
    """Enrolled fingerprint plus the threshold derived from the target
    false-alarm rate; the threshold is always recomputed, never free-set."""

    ground_truth: complex
    est_variance: float
    target_pfa: float
    threshold: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ground_truth", complex(self.ground_truth))
        object.__setattr__(
            self, "threshold", design_threshold(self.target_pfa, self.est_variance)
        )


@dataclass(frozen=True)
class AuthDecision:
    """Outcome of one test: statistic, verdict, and the threshold applied.

    Ties reject: a statistic exactly at the threshold declares an attack
    (measure-zero under the continuous model, pinned for determinism).
    """

    statistic: float
    accepted: bool
    threshold_used: float


def authenticate(estimate: FingerprintEstimate, config: DetectorConfig) -> AuthDecision:
    """Compare the fingerprint estimate against the enrolled ground truth."""
    if not math.isclose(
        estimate.error_variance, config.est_variance, rel_tol=1e-9, abs_tol=0.0
    ):
        warnings.warn(
            "estimate error_variance "
            f"{estimate.error_variance!r} differs from detector est_variance "
            f"{config.est_variance!r}; the detector's value is used",
            stacklevel=2,
        )
    statistic = float(fingerprint_distance(estimate.value, config.ground_truth))
    return AuthDecision(
        statistic=statistic,
        accepted=statistic < config.threshold,
        threshold_used=config.threshold,
    )
