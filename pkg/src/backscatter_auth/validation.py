"""Independent oracles and the built-in self-validation checks.

Everything here exists to certify the closed-form / series code paths from
the outside: the oracles are adaptive quadratures of defining integrals
(via scipy's QUADPACK) and never call into ``backscatter_auth.special``'s
series code, and the statistical checks compare analytic error
probabilities against seeded Monte Carlo runs of the full signaling
pipeline.  The CLI ``validate`` command and the test suite both run these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy import special as sp_special

from . import detection, experiments, signaling
from .rng import RngHandle

# quadrature tolerance: comfortably below every certification threshold here
_QUAD_EPSREL = 1e-13


def bessel_i0_scaled_oracle(x: float) -> float:
    """e^-x I0(x) from the integral representation
    (1/pi) * integral_0^pi exp(x (cos t - 1)) dt, by adaptive quadrature."""
    val, _ = integrate.quad(
        lambda t: math.exp(x * (math.cos(t) - 1.0)), 0.0, math.pi,
        epsabs=0.0, epsrel=_QUAD_EPSREL, limit=200,
    )
    return val / math.pi


def bessel_i0_oracle(x: float) -> float:
    """I0(x) by adaptive quadrature of its integral representation."""
    return math.exp(x) * bessel_i0_scaled_oracle(x)


def marcum_q1_oracle(a: float, b: float) -> float:
    """Q1(a,b) by adaptive quadrature of the defining integral
    integral_b^inf x exp(-(x^2+a^2)/2) I0(a x) dx.

    The integrand is evaluated in the overflow-safe arrangement
    x exp(-(x-a)^2/2) * [e^-ax I0(ax)] with scipy's i0e, so the oracle
    shares no code with the series implementation under test.
    """

    def integrand(x: float) -> float:
        return x * math.exp(-0.5 * (x - a) ** 2) * sp_special.i0e(a * x)

    # split at the density mode for quadrature stability on wide ranges
    points = sorted({b, max(a, 1.0), a + 10.0, b + 10.0})
    total = 0.0
    lo = b
    for pt in points:
        if pt > lo:
            part, _ = integrate.quad(integrand, lo, pt,
                                     epsabs=0.0, epsrel=_QUAD_EPSREL, limit=400)
            total += part
            lo = pt
    tail, _ = integrate.quad(integrand, lo, np.inf,
                             epsabs=0.0, epsrel=_QUAD_EPSREL, limit=400)
    return total + tail


def ks_statistic(sample_a: np.ndarray, sample_b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov statistic (max empirical CDF gap)."""
    a = np.sort(np.asarray(sample_a, dtype=float))
    b = np.sort(np.asarray(sample_b, dtype=float))
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(cdf_a - cdf_b).max())


def ks_critical(alpha: float, n: int, m: int) -> float:
    """Large-sample two-sample KS critical value at level alpha."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n + m) / (n * m))


@dataclass
class CheckResult:
    """One row of the self-validation report."""

    name: str
    passed: bool
    observed: float
    limit: float
    detail: str = ""

    def __post_init__(self):
        # numpy scalars sneak in from the Monte Carlo paths; keep the report
        # plain-Python so it serializes
        self.passed = bool(self.passed)
        self.observed = float(self.observed)
        self.limit = float(self.limit)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: observed {self.observed:.3e} "
                f"(limit {self.limit:.3e}) {self.detail}".rstrip())


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "observed": c.observed,
                    "limit": c.limit,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def check_marcum_vs_quadrature(step: float = 0.25, tol: float = 1e-10) -> CheckResult:
    """Worst relative error of marcum_q1 against the quadrature oracle on
    the grid a, b in {0, step, ..., 10}."""
    from .special import marcum_q1

    worst = 0.0
    worst_at = (0.0, 0.0)
    grid = np.arange(0.0, 10.0 + step / 2, step)
    for a in grid:
        for b in grid:
            ref = marcum_q1_oracle(float(a), float(b)) if b > 0 else 1.0
            got = marcum_q1(float(a), float(b))
            err = abs(got - ref) / ref
            if err > worst:
                worst, worst_at = err, (float(a), float(b))
    return CheckResult(
        name="marcum_q1 vs defining-integral quadrature",
        passed=worst <= tol,
        observed=worst,
        limit=tol,
        detail=f"worst at (a,b)={worst_at}",
    )


def check_false_alarm_grid(trials: int = 100_000, seed: int = 20240) -> CheckResult:
    """Empirical end-to-end H0 rejection rate vs target P_fa on the
    (P_fa, SINR) grid; pass iff every cell is inside 4 binomial stderr."""
    pfa_grid = (0.01, 0.05, 0.1, 0.3)
    worst_sigma = 0.0
    worst_at = ""
    for sinr_db in (0.0, 5.0, 10.0):
        cfg = experiments.ExperimentConfig(
            sinr_db=sinr_db, n_train=8, mu_mag=1.0,
            pfa_grid=pfa_grid, trials=trials, seed=seed,
        )
        rates = experiments.empirical_rejection_rates(cfg, hypothesis="h0")
        for target, rate in zip(pfa_grid, rates):
            stderr = math.sqrt(target * (1.0 - target) / trials)
            n_sigma = abs(rate - target) / stderr
            if n_sigma > worst_sigma:
                worst_sigma = n_sigma
                worst_at = f"pfa={target}, sinr={sinr_db} dB"
    return CheckResult(
        name="false-alarm closed form vs Monte Carlo",
        passed=worst_sigma <= 4.0,
        observed=worst_sigma,
        limit=4.0,
        detail=f"worst deviation (in stderr units) at {worst_at}",
    )


def _missed_detection_deviation(
    trials: int, seed: int, pmd_fn, mu_grid=(0.25, 0.5, 1.0, 2.0),
    sinr_db: float = 5.0, target_pfa: float = 0.1,
) -> tuple[float, str]:
    """Worst |empirical - analytic| missed-detection gap in stderr units,
    with the analytic side supplied by ``pmd_fn(mu, threshold, est_variance)``."""
    worst_sigma = 0.0
    worst_at = ""
    for mu in mu_grid:
        cfg = experiments.ExperimentConfig(
            sinr_db=sinr_db, n_train=1, mu_mag=mu,
            pfa_grid=(target_pfa,), trials=trials, seed=seed,
        )
        accept_rate = 1.0 - experiments.empirical_rejection_rates(cfg, hypothesis="h1")[0]
        delta = detection.design_threshold(target_pfa, cfg.est_variance)
        pmd = pmd_fn(mu, delta, cfg.est_variance)
        stderr = math.sqrt(max(pmd * (1.0 - pmd), 1e-12) / trials)
        n_sigma = abs(accept_rate - pmd) / stderr
        if n_sigma > worst_sigma:
            worst_sigma = n_sigma
            worst_at = f"mu={mu}"
    return worst_sigma, worst_at


def check_missed_detection_grid(trials: int = 100_000, seed: int = 20241) -> CheckResult:
    """Empirical H1 acceptance rate vs the library's missed-detection law.

    Goes through detection.analytic_pmd on purpose: a wrong scale convention
    anywhere in that path makes this check fail (see the mutation check)."""
    worst, at = _missed_detection_deviation(trials, seed, pmd_fn=detection.analytic_pmd)
    return CheckResult(
        name="missed-detection closed form vs Monte Carlo",
        passed=worst <= 4.0,
        observed=worst,
        limit=4.0,
        detail=f"worst deviation (in stderr units) at {at}",
    )


def check_scale_convention_mutation(trials: int = 100_000, seed: int = 20241) -> CheckResult:
    """Mutation power check: reading the half-variance v/2 literally as the
    Rice scale must be rejected by the same Monte Carlo grid."""
    from .special import marcum_q1

    def mutated_pmd(mu: float, delta: float, v: float) -> float:
        s_bad = v / 2.0
        return 1.0 - marcum_q1(mu / s_bad, delta / s_bad)

    worst, at = _missed_detection_deviation(trials, seed, pmd_fn=mutated_pmd)
    return CheckResult(
        name="scale-convention mutation rejected",
        passed=worst > 4.0,
        observed=worst,
        limit=4.0,
        detail=f"mutated law deviates by {worst:.1f} stderr at {at} (must exceed 4)",
    )


def check_consolidation_equivalence(n: int = 100_000, seed: int = 20242) -> CheckResult:
    """Single-draw and expanded-path exchanges must agree in mean (4 stderr),
    complex variance (2%), and KS statistic on |y| (1% critical value)."""
    scenario = experiments.canonical_scenario(sinr_db=5.0, n_train=n, mu_mag=0.0)
    challenge = signaling.SignalFrame.all_ones(n)
    y_cons = signaling.exchange(
        challenge, scenario.legit_link, scenario.tx, scenario.noise,
        RngHandle(seed, (0,))).symbols
    y_exp = signaling.exchange_expanded(
        challenge, scenario.legit_link, scenario.tx, scenario.noise,
        RngHandle(seed, (1,))).symbols

    var_total = scenario.noise.total_variance
    mean_gap = abs(np.mean(y_cons) - np.mean(y_exp))
    mean_limit = 4.0 * math.sqrt(2.0) * math.sqrt(var_total / n)

    v1 = float(np.var(y_cons))
    v2 = float(np.var(y_exp))
    var_gap = abs(v1 - v2) / var_total

    ks = ks_statistic(np.abs(y_cons), np.abs(y_exp))
    ks_limit = ks_critical(0.01, n, n)

    ok = (mean_gap <= mean_limit) and (var_gap <= 0.02) and (ks <= ks_limit)
    return CheckResult(
        name="signaling consolidation equivalence",
        passed=ok,
        observed=ks,
        limit=ks_limit,
        detail=(f"mean gap {mean_gap:.2e}/{mean_limit:.2e}, "
                f"variance gap {var_gap:.2%}/2%, KS vs 1% critical"),
    )


def check_estimator_statistics(trials: int = 100_000, seed: int = 20243) -> CheckResult:
    """LS estimate must be unbiased with per-component variance v/2."""
    scenario = experiments.canonical_scenario(sinr_db=5.0, n_train=8, mu_mag=0.0)
    est = experiments.simulate_estimates(scenario, scenario.legit_link,
                                         trials, RngHandle(seed, (2,)))
    v = scenario.est_variance
    truth = scenario.legit_link.h_res
    comp_se = math.sqrt(v / 2.0 / trials)
    bias_re = abs(float(np.mean(est.real)) - truth.real)
    bias_im = abs(float(np.mean(est.imag)) - truth.imag)
    var_re = float(np.var(est.real))
    var_im = float(np.var(est.imag))
    var_err = max(abs(var_re - v / 2.0), abs(var_im - v / 2.0)) / (v / 2.0)
    ok = bias_re <= 4 * comp_se and bias_im <= 4 * comp_se and var_err <= 0.02
    return CheckResult(
        name="LS estimator bias/variance",
        passed=ok,
        observed=var_err,
        limit=0.02,
        detail=(f"per-component bias ({bias_re:.2e}, {bias_im:.2e}) "
                f"vs 4*stderr {4 * comp_se:.2e}; variance error vs v/2"),
    )


def run_all(fast: bool = False, seed: int = 2024, trials: int | None = None) -> ValidationReport:
    """The full self-validation battery, as run by the CLI validate command."""
    if trials is None:
        trials = 20_000 if fast else 100_000
    marcum_step = 1.0 if fast else 0.25
    n_cons = trials
    report = ValidationReport()
    report.add(check_marcum_vs_quadrature(step=marcum_step))
    report.add(check_false_alarm_grid(trials=trials, seed=seed + 1))
    report.add(check_missed_detection_grid(trials=trials, seed=seed + 2))
    report.add(check_scale_convention_mutation(trials=trials, seed=seed + 2))
    report.add(check_consolidation_equivalence(n=n_cons, seed=seed + 3))
    report.add(check_estimator_statistics(trials=trials, seed=seed + 4))
    return report
