import json

import numpy as np
import pytest

from minact import (
    SweepSpec,
    ThresholdNotAttained,
    run_sweep,
    threshold_time,
)
from minact.sweeps import CSV_HEADER, SweepResult, SweepRow, build_system, make_ramp


@pytest.fixture(scope="module")
def lz_result():
    spec = SweepSpec(
        model="lz",
        params={"delta": 1.0},
        g0=-10.0,
        g_tau=10.0,
        protocols=("linear", "action"),
        tau_min=0.5,
        tau_max=40.0,
        tau_points=10,
    )
    return run_sweep(spec)


def test_spec_validation():
    base = dict(model="lz", params={"delta": 1.0}, g0=-10.0, g_tau=10.0,
                protocols=("linear",), tau_min=0.1, tau_max=1.0, tau_points=5)
    SweepSpec(**base)
    with pytest.raises(ValueError):
        SweepSpec(**{**base, "model": "bogus"})
    with pytest.raises(ValueError):
        SweepSpec(**{**base, "protocols": ()})
    with pytest.raises(ValueError):
        SweepSpec(**{**base, "protocols": ("garbe",)})  # garbe is fc-only
    with pytest.raises(ValueError):
        SweepSpec(**{**base, "tau_min": -1.0})
    with pytest.raises(ValueError):
        SweepSpec(**{**base, "spacing": "cubic"})


def test_tau_grid_sorted_positive():
    spec = SweepSpec(model="ising", params={"N": 4}, g0=0.0, g_tau=2.0,
                     protocols=("linear",), tau_min=0.2, tau_max=5.0, tau_points=7)
    grid = spec.tau_grid()
    assert np.all(grid > 0)
    assert np.all(np.diff(grid) > 0)


def test_from_dict_flat_model_config():
    spec = SweepSpec.from_dict(
        {"model": "lz", "delta": 2.0, "tau_min": 0.1, "tau_max": 1.0, "tau_points": 3}
    )
    assert spec.params["delta"] == 2.0
    assert spec.g0 == -10.0  # model default endpoints
    assert spec.protocols == ("linear", "action")


def test_rows_one_per_tau_protocol(lz_result):
    assert len(lz_result.rows) == 20
    keys = {(r.tau, r.protocol) for r in lz_result.rows}
    assert len(keys) == 20
    for r in lz_result.rows:
        assert 0.0 <= r.fidelity <= 1.0 + 1e-9
        assert r.action > 0


def test_action_column_scales_with_tau(lz_result):
    rows = lz_result.protocol_rows("action")
    assert rows[0].action * rows[0].tau == pytest.approx(rows[-1].action * rows[-1].tau, rel=1e-9)


def test_csv_and_sidecar_schema(tmp_path, lz_result):
    out = tmp_path / "lz.csv"
    lz_result.write(out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 21
    meta = json.loads((tmp_path / "lz.json").read_text())
    assert meta["model"] == "lz"
    assert meta["tau_a"] == pytest.approx(1.0)
    assert meta["tau_l"] is None
    assert meta["params"]["params"]["delta"] == 1.0
    assert "version" in meta
    # metadata is sufficient to re-run the sweep
    respec = SweepSpec.from_dict(meta["params"])
    assert respec == lz_result.spec


def test_determinism_bit_identical(tmp_path):
    spec = SweepSpec(model="ising", params={"N": 4}, g0=0.0, g_tau=2.0,
                     protocols=("linear",), tau_min=0.3, tau_max=3.0, tau_points=4)
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_sweep(spec).write(a)
    run_sweep(spec, threads=2).write(b)
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_threshold_time(lz_result):
    t_lin = threshold_time(lz_result, "linear", 0.9)
    t_act = threshold_time(lz_result, "action", 0.9)
    assert t_act < t_lin
    grid = lz_result.spec.tau_grid()
    assert t_lin in grid
    with pytest.raises(ThresholdNotAttained):
        threshold_time(lz_result, "linear", 0.99999999)
    with pytest.raises(ValueError):
        threshold_time(lz_result, "garbe", 0.5)


def test_threshold_time_first_crossing():
    spec = SweepSpec(model="lz", params={"delta": 1.0}, g0=-1.0, g_tau=1.0,
                     protocols=("linear",), tau_min=1.0, tau_max=2.0, tau_points=2)
    rows = tuple(
        SweepRow(tau=t, protocol="linear", fidelity=f, norm_drift=0.0, steps=100,
                 action=1.0, converged=True)
        for t, f in [(1.0, 0.2), (2.0, 0.95), (3.0, 0.99)]
    )
    from minact.models import Timescales

    res = SweepResult(spec=spec, rows=rows, scales=Timescales(tau_a=1.0))
    assert threshold_time(res, "linear", 0.9) == 2.0


def test_make_ramp_endpoints():
    spec = SweepSpec(model="fc", params={"eta": 10.0}, g0=0.1, g_tau=0.9,
                     protocols=("linear", "action", "garbe"),
                     tau_min=1.0, tau_max=2.0, tau_points=2)
    for protocol in spec.protocols:
        ramp = make_ramp(spec, protocol)
        assert ramp(0.0) == pytest.approx(0.1, abs=1e-12)
        assert ramp(1.0) == pytest.approx(0.9, abs=1e-12)


def test_build_system_types():
    from minact.models import FullyConnected, IsingChain, LandauZener

    lz = build_system(SweepSpec(model="lz", params={}, g0=-1, g_tau=1,
                                protocols=("linear",), tau_min=1, tau_max=1, tau_points=1))
    assert isinstance(lz, LandauZener)
    chain = build_system(SweepSpec(model="ising", params={"N": 8}, g0=0, g_tau=2,
                                   protocols=("linear",), tau_min=1, tau_max=1, tau_points=1))
    assert isinstance(chain, IsingChain) and chain.N == 8
    fc = build_system(SweepSpec(model="fc", params={"eta": 10.0, "n_max": 64}, g0=0.1, g_tau=0.5,
                                protocols=("linear",), tau_min=1, tau_max=1, tau_points=1))
    assert isinstance(fc, FullyConnected)
