"""Monte Carlo engine and ROC sweep generation.

Detector performance depends on the scenario only through the estimation
error variance (equivalently SINR and training length) and the fingerprint
distance, so experiments are parameterized by (sinr_db, n_train, mu_mag).
Raw physical parameters are accepted and reduced via
``ExperimentConfig.from_raw``.

The canonical scenario behind every run: unit reader power, unit aggregate
noise variance, tag amplification set from the SINR, unit-modulus training,
fixed (non-fading) propagation, enrolled fingerprint equal to the
legitimate link's realized residual.

Trials are split into fixed-size shards, each drawing from its own
deterministically derived random stream; shards merge by integer rejection
counts, so results are independent of worker count and scheduling.  The
``BACKSCATTER_AUTH_THREADS`` environment variable caps worker parallelism
(0 or unset = auto).
"""

from __future__ import annotations

import concurrent.futures
import enum
import hashlib
import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .channel import DeviceModel, FixedChannel, LinkRealization, Role, make_link
from .detection import (
    DetectorConfig,
    analytic_pmd,
    authenticate,
    design_threshold,
    fingerprint_distance,
)
from .errors import ConfigurationError, ParameterError
from .estimation import effective_training, ls_estimate
from .rng import RngHandle, sample_complex_normal_array
from .signaling import LinkNoiseParams, SignalFrame, TxParams, exchange, response_gain

SHARD_TRIALS = 16384
THREADS_ENV_VAR = "BACKSCATTER_AUTH_THREADS"

_H0, _H1 = 0, 1


@dataclass(frozen=True)
class ExperimentConfig:
    """One ROC experiment: operating point, grid, and Monte Carlo budget.

    trials = 0 is accepted and means "analytic only"; the empirical engine
    refuses to run on it.
    """

    sinr_db: float
    n_train: int
    mu_mag: float
    pfa_grid: tuple[float, ...]
    trials: int
    seed: int

    def __post_init__(self):
        if not math.isfinite(self.sinr_db):
            raise ConfigurationError(f"sinr_db must be finite, got {self.sinr_db!r}")
        if int(self.n_train) < 1:
            raise ConfigurationError(f"n_train must be >= 1, got {self.n_train!r}")
        object.__setattr__(self, "n_train", int(self.n_train))
        if not math.isfinite(self.mu_mag) or self.mu_mag < 0.0:
            raise ConfigurationError(f"mu_mag must be >= 0, got {self.mu_mag!r}")
        grid = tuple(float(p) for p in self.pfa_grid)
        if not grid:
            raise ConfigurationError("pfa_grid must be nonempty")
        for p in grid:
            if not (0.0 < p < 1.0):
                raise ConfigurationError(f"pfa_grid values must lie in (0, 1), got {p!r}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError("pfa_grid must be strictly increasing")
        object.__setattr__(self, "pfa_grid", grid)
        if int(self.trials) < 0:
            raise ConfigurationError(f"trials must be >= 0, got {self.trials!r}")
        object.__setattr__(self, "trials", int(self.trials))
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def sinr_linear(self) -> float:
        return 10.0 ** (self.sinr_db / 10.0)

    @property
    def est_variance(self) -> float:
        """Estimation-error variance for unit-modulus training of length n_train."""
        return 1.0 / (self.sinr_linear * self.n_train)

    @classmethod
    def from_raw(
        cls,
        p_r: float,
        eta: float,
        sigma2_r: float,
        sigma2_si_r: float,
        sigma2_si_t: float,
        n_train: int,
        mu_mag: float,
        pfa_grid: tuple[float, ...],
        trials: int,
        seed: int,
    ) -> "ExperimentConfig":
        """Reduce raw physical parameters to the (SINR, N, mu) form."""
        tx = TxParams(p_r=p_r, eta=eta)
        noise = LinkNoiseParams(sigma2_r, sigma2_si_r, sigma2_si_t)
        if noise.total_variance <= 0.0:
            raise ConfigurationError("total noise variance must be > 0 to define an SINR")
        sinr = tx.eta**2 * tx.p_r / noise.total_variance
        return cls(
            sinr_db=10.0 * math.log10(sinr),
            n_train=n_train,
            mu_mag=mu_mag,
            pfa_grid=pfa_grid,
            trials=trials,
            seed=seed,
        )

    def digest(self) -> str:
        payload = json.dumps(
            {
                "sinr_db": self.sinr_db,
                "n_train": self.n_train,
                "mu_mag": self.mu_mag,
                "pfa_grid": list(self.pfa_grid),
                "trials": self.trials,
                "seed": self.seed,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


class RocKind(enum.Enum):
    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class RocPoint:
    pfa: float
    pd: float
    kind: RocKind
    stderr: float = 0.0


@dataclass(frozen=True)
class RocCurve:
    points: tuple[RocPoint, ...]
    config_digest: str

    def __post_init__(self):
        pfas = [p.pfa for p in self.points]
        if any(b <= a for a, b in zip(pfas, pfas[1:])):
            raise ConfigurationError("ROC points must be sorted by pfa ascending")


@dataclass(frozen=True)
class Scenario:
    """Fully realized devices, links, and signaling parameters for one run."""

    reader: DeviceModel
    legit_tag: DeviceModel
    malicious_tag: DeviceModel
    legit_link: LinkRealization
    attack_link: LinkRealization
    tx: TxParams
    noise: LinkNoiseParams
    n_train: int
    est_variance: float

    @property
    def ground_truth(self) -> complex:
        """Enrolled fingerprint: the legitimate link's realized residual."""
        return self.legit_link.h_res

    def link_for(self, hypothesis: int) -> LinkRealization:
        return self.legit_link if hypothesis == _H0 else self.attack_link


def canonical_scenario(sinr_db: float, n_train: int, mu_mag: float) -> Scenario:
    """Unit-power, unit-noise scenario hitting the requested SINR, with the
    malicious tag's transmit chain offset so the residual distance is mu_mag."""
    eta = math.sqrt(10.0 ** (sinr_db / 10.0))
    tx = TxParams(p_r=1.0, eta=eta)
    noise = LinkNoiseParams(sigma2_r=0.5, sigma2_si_r=0.25, sigma2_si_t=0.25)
    reader = DeviceModel(h_tx=1 + 0j, h_rx=1 + 0j, role=Role.READER)
    ltag = DeviceModel(h_tx=1 + 0j, h_rx=1 + 0j, role=Role.LEGIT_TAG)
    # independent transmit chain, never derived from the legitimate tag's
    mtag = DeviceModel(h_tx=(1.0 + mu_mag) + 0j, h_rx=1 + 0j, role=Role.MALICIOUS_TAG)
    rng = RngHandle(0)  # fixed channels: realization ignores the stream
    fixed = FixedChannel(1 + 0j)
    legit_link = make_link(reader, ltag, fixed, fixed, rng)
    attack_link = make_link(reader, mtag, fixed, fixed, rng)
    est_variance = noise.total_variance / (tx.eta**2 * tx.p_r * n_train)
    return Scenario(
        reader=reader,
        legit_tag=ltag,
        malicious_tag=mtag,
        legit_link=legit_link,
        attack_link=attack_link,
        tx=tx,
        noise=noise,
        n_train=int(n_train),
        est_variance=est_variance,
    )


def scenario_for(config: ExperimentConfig) -> Scenario:
    return canonical_scenario(config.sinr_db, config.n_train, config.mu_mag)


def run_trial(scenario: Scenario, link: LinkRealization, target_pfa: float,
              rng: RngHandle):
    """One full challenge-response-estimate-decide episode (the reference
    per-trial path; the vectorized engine is bit-identical to it)."""
    challenge = SignalFrame.all_ones(scenario.n_train)
    response = exchange(challenge, link, scenario.tx, scenario.noise, rng)
    estimate = ls_estimate(challenge, response, scenario.tx, scenario.noise)
    config = DetectorConfig(
        ground_truth=scenario.ground_truth,
        est_variance=scenario.est_variance,
        target_pfa=target_pfa,
    )
    return estimate, authenticate(estimate, config)


def simulate_estimates(
    scenario: Scenario, link: LinkRealization, trials: int, rng: RngHandle
) -> np.ndarray:
    """Vectorized LS estimates over `trials` independent exchanges.

    Consumes the random stream exactly like `trials` successive calls of
    the per-trial pipeline on the same handle.
    """
    challenge = SignalFrame.all_ones(scenario.n_train)
    x = challenge.symbols
    gain = response_gain(link, scenario.tx)
    w = sample_complex_normal_array(
        rng, 0j, scenario.noise.total_variance, (int(trials), x.size)
    )
    y = gain * x + w
    x_eff, energy = effective_training(x, scenario.tx)
    return np.sum(np.conj(x_eff) * y, axis=1) / energy


def simulate_statistics(
    scenario: Scenario, link: LinkRealization, trials: int, rng: RngHandle
) -> np.ndarray:
    """Vectorized test statistics |estimate - ground truth|."""
    est = simulate_estimates(scenario, link, trials, rng)
    return fingerprint_distance(est, scenario.ground_truth)


def _worker_count(n_shards: int) -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "0").strip()
    try:
        requested = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be >= 0, got {requested}")
    if requested == 0:
        requested = os.cpu_count() or 1
    return max(1, min(requested, n_shards))


def _shard_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, SHARD_TRIALS)
    return [SHARD_TRIALS] * full + ([rest] if rest else [])


def empirical_rejection_counts(
    config: ExperimentConfig, hypothesis: str = "h1"
) -> np.ndarray:
    """Integer rejection counts per pfa-grid threshold, merged over shards.

    hypothesis "h0" runs the legitimate link (counts are false alarms),
    "h1" the attack link (counts are detections).
    """
    if config.trials < 1:
        raise ParameterError("empirical run requires trials >= 1")
    h_idx = {"h0": _H0, "h1": _H1}.get(hypothesis)
    if h_idx is None:
        raise ParameterError(f"hypothesis must be 'h0' or 'h1', got {hypothesis!r}")

    scenario = scenario_for(config)
    link = scenario.link_for(h_idx)
    thresholds = np.array(
        [design_threshold(p, scenario.est_variance) for p in config.pfa_grid]
    )
    root = RngHandle(config.seed).spawn(h_idx)
    sizes = _shard_sizes(config.trials)

    def shard_counts(item: tuple[int, int]) -> np.ndarray:
        index, size = item
        stats = simulate_statistics(scenario, link, size, root.spawn(index))
        stats.sort()
        # ties reject: statistic == threshold counts as a rejection
        accepted = np.searchsorted(stats, thresholds, side="left")
        return (size - accepted).astype(np.int64)

    items = list(enumerate(sizes))
    workers = _worker_count(len(items))
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(shard_counts, items))
    else:
        parts = [shard_counts(item) for item in items]
    return np.sum(parts, axis=0, dtype=np.int64)


def empirical_rejection_rates(
    config: ExperimentConfig, hypothesis: str = "h1"
) -> np.ndarray:
    return empirical_rejection_counts(config, hypothesis) / config.trials


def roc_analytic(config: ExperimentConfig) -> RocCurve:
    """Closed-form ROC: pd = 1 - missed-detection probability at the
    threshold designed for each grid pfa."""
    v = config.est_variance
    points = []
    for pfa in config.pfa_grid:
        delta = design_threshold(pfa, v)
        pd = 1.0 - analytic_pmd(config.mu_mag, delta, v)
        points.append(RocPoint(pfa=pfa, pd=pd, kind=RocKind.ANALYTIC, stderr=0.0))
    return RocCurve(points=tuple(points), config_digest=config.digest())


def roc_empirical(config: ExperimentConfig) -> RocCurve:
    """Monte Carlo ROC from full-pipeline trials under the attack hypothesis."""
    rates = empirical_rejection_rates(config, hypothesis="h1")
    points = tuple(
        RocPoint(
            pfa=pfa,
            pd=float(pd),
            kind=RocKind.EMPIRICAL,
            stderr=math.sqrt(pd * (1.0 - pd) / config.trials),
        )
        for pfa, pd in zip(config.pfa_grid, rates)
    )
    return RocCurve(points=points, config_digest=config.digest())


def sweep_attacker(base: ExperimentConfig, mu_grid) -> list[RocCurve]:
    """Analytic ROC curves over attacker fingerprint distances, SINR held."""
    mu_values = list(mu_grid)
    if not mu_values:
        raise ParameterError("mu_grid must be nonempty")
    for mu in mu_values:
        if not math.isfinite(mu) or mu < 0.0:
            raise ParameterError(f"mu values must be >= 0, got {mu!r}")
    return [roc_analytic(replace(base, mu_mag=float(mu))) for mu in mu_values]
