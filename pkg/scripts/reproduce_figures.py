"""Run the four default sweeps (receptors, similarity, channels, ratio).

Writes one CSV and one SVG per sweep into --out (default: results/).

    python scripts/reproduce_figures.py --mc --trials 20000
"""

import argparse
import logging
from pathlib import Path

from admux import SystemConfig
from admux.sweep import SweepSpec, emit_csv, emit_plot, run_sweep

SWEEPS = {
    "a_receptors": ("receptors", (200, 400, 600, 800, 1000)),
    "b_similarity": ("similarity", (2, 3, 5, 8)),
    "c_channels": ("channels", (2, 3, 4, 5, 6)),
    "d_ratio": ("ratio", (2, 3, 5, 8, 10)),
}

log = logging.getLogger(__name__)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--mc", action="store_true")
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--variance-mode", default="paper", choices=("paper", "full"))
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = SystemConfig(variance_mode=args.variance_mode)
    for name, (axis, values) in SWEEPS.items():
        spec = SweepSpec(axis, values, base=base, with_montecarlo=args.mc, mc_trials=args.trials,
                         mc_seed=args.seed, workers=args.workers)
        result = run_sweep(spec)
        emit_csv(result, out / f"fig_{name}.csv")
        emit_plot(result, out / f"fig_{name}.svg")
        for row in result.rows:
            mc = "" if row.bep_mc is None else f"  mc={row.bep_mc:.3e} +/- {row.bep_mc_3sigma:.1e}"
            log.info("%-10s %8g  bep=%.3e%s", axis, row.value, row.bep_mean, mc)


if __name__ == "__main__":
    main()
