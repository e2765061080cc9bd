"""Command line interface: ``analyze``, ``sweep`` and ``simulate``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from .config import SystemConfig
from .detection import VARIANCE_MODES, channel_decisions, mixture_bep
from .errors import ConfigError, NumericalError
from .montecarlo import TrialConfig, binomial_half_width, empirical_bep, run_trials
from .sweep import AXES, SweepPointError, SweepSpec, emit_csv, emit_plot, run_sweep

log = logging.getLogger("admux")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# flag name -> SystemConfig field
_OVERRIDES = {
    "receptors": ("N_R", int),
    "channels": ("N_C", int),
    "gamma": ("gamma", float),
    "distance": ("r", float),
    "n0": ("N0", float),
    "n1": ("N1", float),
    "v": ("v", float),
    "k_on": ("k_on", float),
    "k_off_base": ("k_off_base", float),
}


def _add_system_args(p):
    g = p.add_argument_group("system configuration")
    g.add_argument("--config", help="flat TOML file with SystemConfig keys")
    g.add_argument("--variance-mode", choices=VARIANCE_MODES, default=None)
    for flag, (name, typ) in _OVERRIDES.items():
        g.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=typ, default=None, help=f"override {name}")


def _system_from_args(args) -> SystemConfig:
    overrides = {name: getattr(args, flag) for flag, (name, _) in _OVERRIDES.items()}
    overrides["variance_mode"] = args.variance_mode
    if args.config:
        return SystemConfig.load(args.config, **overrides)
    return SystemConfig.from_mapping({k: v for k, v in overrides.items() if v is not None})


def _parse_values(text):
    try:
        return [float(v) for v in text.replace(" ", ",").split(",") if v]
    except ValueError as exc:
        raise ConfigError(f"cannot parse axis values {text!r}") from exc


def cmd_analyze(args):
    system = _system_from_args(args)
    panel, sep, channel = system.panel(), system.separation(), system.channel()
    decisions = channel_decisions(panel, sep, channel, system.N_R, system.variance_mode)
    beps = [d.bep for d in decisions]
    report = {
        "config": system.to_dict(),
        "k_off": panel.k_off.tolist(),
        "separation_condition_number": sep.condition_number,
        "channels": [
            {
                "channel": i + 1,
                "threshold": d.threshold,
                "bep": d.bep,
                "mean_given_0": d.moments0.mean,
                "var_given_0": d.moments0.variance,
                "mean_given_1": d.moments1.mean,
                "var_given_1": d.moments1.variance,
            }
            for i, d in enumerate(decisions)
        ],
        "mean_bep": float(np.mean(beps)),
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_sweep(args):
    spec = SweepSpec(
        axis=args.axis,
        values=tuple(_parse_values(args.values)),
        base=_system_from_args(args),
        with_montecarlo=args.mc,
        mc_trials=args.trials,
        mc_seed=args.seed,
        workers=args.workers,
    )
    result = run_sweep(spec)
    emit_csv(result, args.out_csv)
    log.info("wrote %s", args.out_csv)
    if args.out_plot:
        emit_plot(result, args.out_plot)
        log.info("wrote %s", args.out_plot)


def trial_csv_text(result) -> str:
    M = result.estimates.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["trial"] + [f"s{i + 1}" for i in range(M)] + [f"c_hat{i + 1}" for i in range(M)] + [f"err{i + 1}" for i in range(M)]
    )
    for t in range(result.trials):
        w.writerow(
            [t]
            + result.true_bits[t].tolist()
            + [f"{x:.9e}" for x in result.estimates[t]]
            + result.bit_errors[t].tolist()
        )
    return buf.getvalue()


def cmd_simulate(args):
    system = _system_from_args(args)
    panel, sep, channel = system.panel(), system.separation(), system.channel()
    decisions = channel_decisions(panel, sep, channel, system.N_R, system.variance_mode)
    thresholds = np.array([d.threshold for d in decisions])
    cfg = TrialConfig(seed=args.seed, trials=args.trials, panel=panel, channel=channel, N_R=system.N_R)
    result = run_trials(cfg, thresholds=thresholds, workers=args.workers)
    rates, mean_rate, half = empirical_bep(result)
    analytical = np.array([d.bep for d in decisions])
    summary = {
        "config": system.to_dict(),
        "seed": args.seed,
        "trials": args.trials,
        "thresholds": thresholds.tolist(),
        "empirical_bep": rates.tolist(),
        "empirical_bep_3sigma": half.tolist(),
        "empirical_mean_bep": mean_rate,
        "analytical_bep": analytical.tolist(),
        "analytical_mean_bep": float(analytical.mean()),
        "analytical_mean_bep_3sigma": float(binomial_half_width(analytical.mean(), args.trials * panel.M)),
        "mixture_bep": mixture_bep(panel, sep, channel, system.N_R, thresholds).tolist(),
    }
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(trial_csv_text(result))
        log.info("wrote %s", args.out_csv)
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="admux", description="Affinity-division multiplexing BEP analysis")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analytical BEP for one configuration (JSON to stdout)")
    _add_system_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV/SVG")
    _add_system_args(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", required=True, help="comma-separated ascending axis values")
    p.add_argument("--mc", action="store_true", help="also run the Monte Carlo oracle")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-plot")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo run for one configuration")
    _add_system_args(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-csv", help="per-trial bits, estimates and errors")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except SweepPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL if isinstance(exc.__cause__, NumericalError) else EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
