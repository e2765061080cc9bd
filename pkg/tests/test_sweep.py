import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from admux import SystemConfig
from admux.errors import ConfigError, IllConditionedError
from admux.sweep import (
    SweepPointError,
    SweepResult,
    SweepRow,
    SweepSpec,
    csv_text,
    emit_csv,
    emit_plot,
    read_csv,
    run_sweep,
    svg_text,
)


def test_receptor_sweep_nonincreasing():
    res = run_sweep(SweepSpec("receptors", (200, 400, 600, 800, 1000)))
    assert list(res.bep_mean) == sorted(res.bep_mean, reverse=True)
    assert len(res.rows) == 5


def test_similarity_sweep_nonincreasing():
    res = run_sweep(SweepSpec("similarity", (2, 3, 5, 8)))
    assert list(res.bep_mean) == sorted(res.bep_mean, reverse=True)


def test_channel_sweep_nondecreasing_and_ragged_rows():
    res = run_sweep(SweepSpec("channels", (2, 3, 4, 5, 6)))
    assert list(res.bep_mean) == sorted(res.bep_mean)
    assert [len(r.bep) for r in res.rows] == [2, 3, 4, 5, 6]


def test_ratio_sweep_scales_n1_only():
    spec = SweepSpec("ratio", (2, 10))
    cfg = spec.config_at(10)
    assert cfg.N0 == spec.base.N0 and cfg.N1 == 10 * spec.base.N0


@pytest.mark.parametrize(
    "kw",
    [
        dict(axis="distance", values=(1, 2)),
        dict(axis="receptors", values=(200,)),
        dict(axis="receptors", values=(400, 200)),
        dict(axis="similarity", values=(0, 2)),
        dict(axis="channels", values=(2, 2.5)),
    ],
)
def test_spec_validation(kw):
    with pytest.raises(ConfigError):
        SweepSpec(**kw)


def test_failure_names_axis_value():
    spec = SweepSpec("channels", (2, 12), base=SystemConfig(gamma=1.05))
    with pytest.raises(SweepPointError, match="at value 12") as info:
        run_sweep(spec)
    assert info.value.value == 12
    assert isinstance(info.value.__cause__, IllConditionedError)


def _toy_result(mc=False, n=3):
    rows = tuple(
        SweepRow(
            value=float(200 * (k + 1)),
            bep=np.array([0.1 / (k + 1), 0.01 / (k + 1)]),
            bep_mean=0.055 / (k + 1),
            bep_mc=0.05 / (k + 1) if mc else None,
            bep_mc_3sigma=0.004 if mc else None,
        )
        for k in range(n)
    )
    return SweepResult("receptors", rows)


def test_csv_rows_and_header(tmp_path):
    path = emit_csv(_toy_result(), tmp_path / "a.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "receptors,bep_ch1,bep_ch2,bep_mean"
    assert len(lines) == 4
    assert lines[1].split(",")[0] == "2.000000000e+02"


def test_csv_header_only_for_empty_result():
    assert csv_text(SweepResult("ratio", ())).splitlines() == ["ratio,bep_mean"]


def test_csv_mc_columns_and_byte_stability(tmp_path):
    a = emit_csv(_toy_result(mc=True), tmp_path / "a.csv").read_bytes()
    b = emit_csv(_toy_result(mc=True), tmp_path / "b.csv").read_bytes()
    assert a == b
    assert a.splitlines()[0].endswith(b"bep_mean,bep_mc,bep_mc_3sigma")


@given(vals=st.lists(st.floats(1e-300, 0.5), min_size=3, max_size=3))
def test_csv_round_trip(vals, tmp_path_factory):
    res = SweepResult(
        "similarity",
        (SweepRow(2.0, np.array(vals[:2]), vals[2], vals[0], vals[1]), SweepRow(3.5, np.array(vals[1:]), vals[0])),
    )
    path = tmp_path_factory.mktemp("rt") / "r.csv"
    back = read_csv(emit_csv(res, path))
    assert back.axis == "similarity"
    for r, q in zip(res.rows, back.rows):
        assert q.value == r.value
        np.testing.assert_allclose(q.bep, r.bep, rtol=1e-9)
        assert q.bep_mean == pytest.approx(r.bep_mean, rel=1e-9)
    assert back.rows[0].bep_mc == pytest.approx(vals[0], rel=1e-9)
    assert back.rows[1].bep_mc is None


def test_real_sweep_round_trip(tmp_path):
    res = run_sweep(SweepSpec("channels", (2, 4)))
    back = read_csv(emit_csv(res, tmp_path / "c.csv"))
    np.testing.assert_allclose(back.bep_mean, res.bep_mean, rtol=1e-9)
    np.testing.assert_allclose(back.rows[0].bep, res.rows[0].bep, rtol=1e-9)


def test_sweep_with_montecarlo_is_reproducible():
    spec = SweepSpec("receptors", (100, 200), base=SystemConfig(N_C=2, gamma=2.0), with_montecarlo=True,
                     mc_trials=3000, mc_seed=5)
    a, b = csv_text(run_sweep(spec)), csv_text(run_sweep(spec))
    assert a == b
    rows = run_sweep(spec).rows
    assert all(r.bep_mc is not None and r.bep_mc_3sigma > 0 for r in rows)


def test_svg_log_ticks_cover_data():
    svg = svg_text(_toy_result())
    assert svg.startswith("<?xml") and 'version="1.1"' in svg
    ticks = re.findall(r'class="ytick"[^>]*>1e(-?\d+)<', svg)
    exponents = sorted(int(t) for t in ticks)
    data = np.log10([r.bep_mean for r in _toy_result().rows])
    assert exponents[0] <= np.floor(data.min()) and exponents[-1] >= np.ceil(data.max())
    assert 'class="analytical"' in svg


def test_svg_markers_only_with_montecarlo(tmp_path):
    assert "mc-marker" not in svg_text(_toy_result())
    assert "mc-errorbar" not in svg_text(_toy_result())
    with_mc = svg_text(_toy_result(mc=True))
    assert with_mc.count('class="mc-marker"') == 3
    assert with_mc.count('class="mc-errorbar"') == 3
    a = emit_plot(_toy_result(mc=True), tmp_path / "a.svg").read_bytes()
    b = emit_plot(_toy_result(mc=True), tmp_path / "b.svg").read_bytes()
    assert a == b
    assert "http" not in with_mc.replace("http://www.w3.org/2000/svg", "")


def test_unwritable_path_raises(tmp_path):
    with pytest.raises(OSError):
        emit_csv(_toy_result(), tmp_path / "missing" / "a.csv")
    with pytest.raises(OSError):
        emit_plot(_toy_result(), tmp_path / "missing" / "a.svg")
