"""One-axis parameter sweeps with CSV and SVG output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import SystemConfig
from .detection import channel_decisions
from .errors import ADMError, ConfigError
from .montecarlo import TrialConfig, binomial_half_width, empirical_bep, run_trials

AXES = ("receptors", "similarity", "channels", "ratio")
AXIS_LABELS = {
    "receptors": "number of receptors N_R",
    "similarity": "similarity parameter gamma",
    "channels": "number of channels N_C",
    "ratio": "bit-1/bit-0 ratio N1/N0",
}


class SweepPointError(ADMError):
    """A single axis point failed; ``__cause__`` holds the original error."""

    def __init__(self, axis, value, cause):
        self.axis = axis
        self.value = value
        super().__init__(f"sweep over {axis} failed at value {value}: {cause}")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    base: SystemConfig = field(default_factory=SystemConfig)
    with_montecarlo: bool = False
    mc_trials: int = 10_000
    mc_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        values = tuple(float(v) for v in self.values)
        if len(values) < 2:
            raise ConfigError("a sweep needs at least two axis values")
        if any(not v > 0 for v in values):
            raise ConfigError("axis values must be positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("axis values must be sorted strictly ascending")
        if self.axis in ("receptors", "channels") and any(v != int(v) for v in values):
            raise ConfigError(f"{self.axis} values must be integers")
        object.__setattr__(self, "values", values)
        if self.with_montecarlo and self.mc_trials < 1:
            raise ConfigError("mc_trials must be positive")

    def config_at(self, value) -> SystemConfig:
        if self.axis == "receptors":
            return self.base.replace(N_R=int(value))
        if self.axis == "channels":
            return self.base.replace(N_C=int(value))
        if self.axis == "similarity":
            return self.base.replace(gamma=value)
        # ratio sweeps scale N1 with N0 held fixed
        return self.base.replace(N1=value * self.base.N0)


@dataclass(frozen=True)
class SweepRow:
    value: float
    bep: np.ndarray
    bep_mean: float
    bep_mc: float | None = None
    bep_mc_3sigma: float | None = None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    rows: tuple

    @property
    def values(self):
        return np.array([r.value for r in self.rows])

    @property
    def bep_mean(self):
        return np.array([r.bep_mean for r in self.rows])

    @property
    def has_montecarlo(self):
        return any(r.bep_mc is not None for r in self.rows)


def evaluate_point(spec: SweepSpec, value) -> SweepRow:
    system = spec.config_at(value)
    panel, sep, channel = system.panel(), system.separation(), system.channel()
    decisions = channel_decisions(panel, sep, channel, system.N_R, system.variance_mode)
    beps = np.array([d.bep for d in decisions])
    row = SweepRow(value=float(value), bep=beps, bep_mean=float(beps.mean()))
    if not spec.with_montecarlo:
        return row
    cfg = TrialConfig(seed=spec.mc_seed, trials=spec.mc_trials, panel=panel, channel=channel, N_R=system.N_R)
    result = run_trials(cfg, thresholds=[d.threshold for d in decisions], workers=spec.workers)
    _, mc_mean, _ = empirical_bep(result)
    # all M * trials decisions pooled into one proportion
    half = float(binomial_half_width(mc_mean, result.trials * panel.M))
    return SweepRow(row.value, row.bep, row.bep_mean, mc_mean, half)


def run_sweep(spec: SweepSpec) -> SweepResult:
    rows = []
    for value in spec.values:
        try:
            rows.append(evaluate_point(spec, value))
        except ADMError as exc:
            raise SweepPointError(spec.axis, value, exc) from exc
    return SweepResult(axis=spec.axis, rows=tuple(rows))


def _fmt(x) -> str:
    return "" if x is None else f"{x:.9e}"


def csv_text(result: SweepResult) -> str:
    n_ch = max((len(r.bep) for r in result.rows), default=0)
    header = [result.axis] + [f"bep_ch{i + 1}" for i in range(n_ch)] + ["bep_mean"]
    if result.has_montecarlo:
        header += ["bep_mc", "bep_mc_3sigma"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in result.rows:
        cells = [_fmt(r.value)] + [_fmt(b) for b in r.bep] + [""] * (n_ch - len(r.bep))
        cells.append(_fmt(r.bep_mean))
        if result.has_montecarlo:
            cells += [_fmt(r.bep_mc), _fmt(r.bep_mc_3sigma)]
        writer.writerow(cells)
    return buf.getvalue()


def emit_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(result))
    return path


def read_csv(path) -> SweepResult:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = []
        for cells in reader:
            rec = dict(zip(header, cells))
            bep = [float(rec[h]) for h in header if h.startswith("bep_ch") and rec[h] != ""]
            mc = rec.get("bep_mc") or None
            mc_hw = rec.get("bep_mc_3sigma") or None
            rows.append(
                SweepRow(
                    value=float(cells[0]),
                    bep=np.array(bep),
                    bep_mean=float(rec["bep_mean"]),
                    bep_mc=None if mc is None else float(mc),
                    bep_mc_3sigma=None if mc_hw is None else float(mc_hw),
                )
            )
    return SweepResult(axis=header[0], rows=tuple(rows))


# --- SVG ------------------------------------------------------------------

_W, _H = 640, 440
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 30, 40, 60


def _decade_range(result: SweepResult):
    ys = [r.bep_mean for r in result.rows]
    for r in result.rows:
        if r.bep_mc is not None:
            ys += [r.bep_mc + r.bep_mc_3sigma, r.bep_mc - r.bep_mc_3sigma, r.bep_mc]
    positive = [y for y in ys if y > 0]
    if not positive:
        return -1, 0
    lo = math.floor(math.log10(min(positive)))
    hi = math.ceil(math.log10(max(positive)))
    return lo, max(hi, lo + 1)


def svg_text(result: SweepResult) -> str:
    """Render mean BEP against the swept value on a log-scale BEP axis."""
    xs = result.values
    lo, hi = _decade_range(result)
    x0, x1 = float(xs.min()), float(xs.max())
    if x1 == x0:
        x1 = x0 + 1.0
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        # zeros and underflow are pinned to the bottom decade
        ly = math.log10(y) if y > 0 else lo
        ly = min(max(ly, lo), hi)
        return _TOP + (hi - ly) / (hi - lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<rect class="frame" x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in range(lo, hi + 1):
        y = py(10.0**d)
        out.append(f'<line class="grid" x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(
            f'<text class="ytick" x="{_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="12">1e{d}</text>'
        )
    for x in xs:
        out.append(
            f'<text class="xtick" x="{px(x):.2f}" y="{_TOP + ph + 18}" text-anchor="middle" '
            f'font-size="12">{x:g}</text>'
        )
    out.append(
        f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 15}" text-anchor="middle" font-size="14">'
        f"{AXIS_LABELS.get(result.axis, result.axis)}</text>"
    )
    out.append(
        f'<text x="20" y="{_TOP + ph / 2:.2f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {_TOP + ph / 2:.2f})">mean BEP</text>'
    )
    points = " ".join(f"{px(r.value):.2f},{py(r.bep_mean):.2f}" for r in result.rows)
    out.append(f'<polyline class="analytical" points="{points}" fill="none" stroke="#1f4e99" stroke-width="2"/>')
    for r in result.rows:
        if r.bep_mc is None:
            continue
        x = px(r.value)
        y_top, y_bot = py(r.bep_mc + r.bep_mc_3sigma), py(r.bep_mc - r.bep_mc_3sigma)
        out.append(
            f'<line class="mc-errorbar" x1="{x:.2f}" y1="{y_top:.2f}" x2="{x:.2f}" y2="{y_bot:.2f}" stroke="#b22"/>'
        )
        out.append(f'<circle class="mc-marker" cx="{x:.2f}" cy="{py(r.bep_mc):.2f}" r="4" fill="#b22"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(result: SweepResult, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg_text(result))
    return path
