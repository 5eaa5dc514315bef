"""Command-line front end: roc, sweep, validate, auth.

Exit codes are stable: 0 success (or authentication accept), 1 any error
(bad config, unwritable output, failed validation), 2 authentication
reject.  CSV output is byte-deterministic for a fixed config and seed:
17-significant-digit shortest-form floats, '.' decimal separator, LF line
endings.  Each file-emitting command writes manifest.json last, so the
manifest's presence signals a complete run.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .channel import FixedChannel, make_link
from .config import ConfigDocument, device_from, load_config, signaling_params
from .detection import DetectorConfig, authenticate
from .errors import ConfigurationError, ParameterError, ShapeError
from .estimation import estimation_error_variance, ls_estimate
from .experiments import (
    ExperimentConfig,
    RocCurve,
    roc_analytic,
    roc_empirical,
    sweep_attacker,
)
from .rng import RngHandle
from .signaling import SignalFrame, exchange

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECT = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route usage problems through the exit-code contract (1, not argparse's 2)
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _roc_csv(curve: RocCurve) -> str:
    lines = ["pfa,pd,kind,stderr"]
    for p in curve.points:
        lines.append(
            f"{_format_float(p.pfa)},{_format_float(p.pd)},{p.kind.value},{_format_float(p.stderr)}"
        )
    return "\n".join(lines) + "\n"


def _write_text(path: Path, content: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def _prepare_out_dir(out: str) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    probe = out_dir / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return out_dir


def _experiment_from(doc: ConfigDocument, args) -> ExperimentConfig:
    """Build the experiment, preferring an explicit sinr_db and falling back
    to reduction of raw signaling parameters."""
    common = dict(
        n_train=doc.get_int("experiment", "n_train"),
        mu_mag=doc.get_float("experiment", "mu_mag"),
        pfa_grid=doc.get_pfa_grid(),
        trials=doc.get_int("experiment", "trials"),
        seed=doc.get_int("experiment", "seed"),
    )
    if args.seed is not None:
        common["seed"] = args.seed
    if args.trials is not None:
        common["trials"] = args.trials
    if doc.has("experiment", "sinr_db"):
        return ExperimentConfig(sinr_db=doc.get_float("experiment", "sinr_db"), **common)
    if "signaling" in doc.sections:
        tx, noise = signaling_params(doc)
        return ExperimentConfig.from_raw(
            p_r=tx.p_r,
            eta=tx.eta,
            sigma2_r=noise.sigma2_r,
            sigma2_si_r=noise.sigma2_si_r,
            sigma2_si_t=noise.sigma2_si_t,
            **common,
        )
    raise ConfigurationError(
        f"{doc.path}: need either [experiment] sinr_db or a [signaling] section"
    )


@dataclass
class RunManifest:
    """Completion record of a file-emitting command; written last, so its
    presence in the output directory signals a finished run."""

    command: str
    config_path: str
    config_digest: str
    output_dir: str
    emitted_files: list[str] = field(default_factory=list)
    seed: int = 0
    wall_time_s: float = 0.0

    def write(self, out_dir: Path) -> None:
        _write_text(out_dir / "manifest.json",
                    json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def _write_manifest(out_dir: Path, command: str, doc: ConfigDocument,
                    digest: str, emitted: list[str], started: float,
                    seed: int) -> None:
    RunManifest(
        command=command,
        config_path=str(doc.path),
        config_digest=digest,
        output_dir=str(out_dir),
        emitted_files=emitted,
        seed=seed,
        wall_time_s=round(time.perf_counter() - started, 6),
    ).write(out_dir)


def _cmd_roc(args) -> int:
    started = time.perf_counter()
    doc = load_config(args.config)
    cfg = _experiment_from(doc, args)
    out_dir = _prepare_out_dir(args.out)

    emitted: list[str] = []
    _write_text(out_dir / "roc_analytic.csv", _roc_csv(roc_analytic(cfg)))
    emitted.append("roc_analytic.csv")
    if cfg.trials > 0:
        _write_text(out_dir / "roc_empirical.csv", _roc_csv(roc_empirical(cfg)))
        emitted.append("roc_empirical.csv")
    _write_manifest(out_dir, "roc", doc, cfg.digest(), emitted, started, cfg.seed)
    print(f"wrote {', '.join(emitted)} to {out_dir}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    started = time.perf_counter()
    mu_values = [float(v) for v in args.mu_list.split(",") if v.strip()]
    if not mu_values:
        raise _UsageError("sweep: --mu-list must contain at least one value")
    doc = load_config(args.config)
    cfg = _experiment_from(doc, args)
    out_dir = _prepare_out_dir(args.out)

    curves = sweep_attacker(cfg, mu_values)
    emitted = []
    for mu, curve in zip(mu_values, curves):
        name = f"roc_mu_{mu:.4f}.csv"
        _write_text(out_dir / name, _roc_csv(curve))
        emitted.append(name)
    _write_manifest(out_dir, "sweep", doc, cfg.digest(), emitted, started, cfg.seed)
    print(f"wrote {len(emitted)} curve(s) to {out_dir}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .validation import run_all

    report = run_all(fast=args.fast, seed=args.seed if args.seed is not None else 2024,
                     trials=args.trials)
    if args.json_summary:
        print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        for check in report.checks:
            print(check.line())
        print("overall:", "PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_ERROR


def _cmd_auth(args) -> int:
    doc = load_config(args.config)
    responder = doc.get_choice("experiment", "responder", ("ltag", "mtag"))
    n_train = doc.get_int("experiment", "n_train")
    seed = args.seed if args.seed is not None else doc.get_int("experiment", "seed")
    target_pfa = doc.get_float("detector", "target_pfa")
    tx, noise = signaling_params(doc)

    reader = device_from(doc, "reader")
    ltag = device_from(doc, "ltag")
    tag = ltag if responder == "ltag" else device_from(doc, "mtag")

    # authentication episode isolates the device fingerprints: propagation
    # is held at unit gain, enrollment uses the legitimate link's residual
    rng = RngHandle(seed)
    unit = FixedChannel(1 + 0j)
    legit_link = make_link(reader, ltag, unit, unit, rng)
    responder_link = legit_link if responder == "ltag" else make_link(reader, tag, unit, unit, rng)

    challenge = SignalFrame.all_ones(n_train)
    response = exchange(challenge, responder_link, tx, noise, rng)
    estimate = ls_estimate(challenge, response, tx, noise)
    detector = DetectorConfig(
        ground_truth=legit_link.h_res,
        est_variance=estimation_error_variance(tx, noise, challenge.energy),
        target_pfa=target_pfa,
    )
    decision = authenticate(estimate, detector)

    verdict = "ACCEPT" if decision.accepted else "REJECT"
    if args.json_summary:
        print(json.dumps({
            "responder": responder,
            "estimate_re": estimate.value.real,
            "estimate_im": estimate.value.imag,
            "statistic": decision.statistic,
            "threshold": decision.threshold_used,
            "decision": verdict,
        }, indent=2, sort_keys=True))
    else:
        print(f"responder:  {responder}")
        print(f"estimate:   {estimate.value:.9g}")
        print(f"statistic:  {decision.statistic:.9g}")
        print(f"threshold:  {decision.threshold_used:.9g}")
        print(f"decision:   {verdict}")
    return EXIT_OK if decision.accepted else EXIT_REJECT


def build_parser() -> _Parser:
    parser = _Parser(prog="backscatter-auth",
                     description="Backscatter-link fingerprint authentication simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="path to the key-value config file")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--trials", type=int, default=None, help="override the Monte Carlo budget")

    p_roc = sub.add_parser("roc", help="analytic + empirical ROC curves to CSV")
    add_common(p_roc)
    p_roc.add_argument("--out", default="out", help="output directory (default: ./out)")
    p_roc.set_defaults(func=_cmd_roc)

    p_sweep = sub.add_parser("sweep", help="analytic ROC curves over attacker distances")
    add_common(p_sweep)
    p_sweep.add_argument("--mu-list", required=True,
                         help="comma list of fingerprint distances, e.g. 0.5,1.0,2.0")
    p_sweep.add_argument("--out", default="out", help="output directory (default: ./out)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="run the built-in oracle/Monte-Carlo checks")
    add_common(p_val, needs_config=False)
    p_val.add_argument("--fast", action="store_true", help="reduced budget, < 30 s")
    p_val.add_argument("--json-summary", action="store_true", help="machine-readable report")
    p_val.set_defaults(func=_cmd_validate)

    p_auth = sub.add_parser("auth", help="one authentication episode from a scenario config")
    add_common(p_auth)
    p_auth.add_argument("--json-summary", action="store_true", help="machine-readable result")
    p_auth.set_defaults(func=_cmd_auth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    except (ConfigurationError, ParameterError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
