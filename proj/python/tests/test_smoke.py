import math

import numpy as np
import pytest

import msdg


def test_presets_listed_and_loadable():
    names = msdg.preset_names()
    assert "wave_accuracy_central_k2" in names
    cfg = msdg.preset("nls_charge")
    assert cfg["model"] == "nls"
    assert msdg.load_config(cfg) == cfg


def test_bad_config_raises_config_error():
    with pytest.raises(msdg.ConfigError):
        msdg.load_config({"model": "wave", "colour": 1})
    with pytest.raises(ValueError):
        msdg.preset("no_such_preset")


def test_compute_order():
    orders = msdg.compute_order([1e-2, 2.5e-3], [10, 20])
    assert math.isnan(orders[0])
    assert orders[1] == pytest.approx(2.0)


def test_small_convergence_study():
    cfg = msdg.preset("wave_accuracy_central_k2")
    cfg["N"] = [10, 20, 40]
    table = msdg.run_convergence(cfg)
    assert [r["N"] for r in table["rows"]] == [10, 20, 40]
    assert table["rows"][-1]["order_u"] == pytest.approx(3.0, abs=0.3)
    assert table["csv"].startswith("N,err_u,order_u,err_aux,order_aux")


def test_simulation_conserves_charge(tmp_path):
    cfg = msdg.preset("nls_charge")
    cfg.update(T=0.05, N=8)
    out = msdg.run_simulation(cfg, tmp_path)
    assert not out["diverged"]
    charge = [e[3] for e in out["energy"]]
    assert max(abs(c - charge[0]) for c in charge) < 1e-10
    assert (tmp_path / "energy.csv").exists()


def test_verification_single_model():
    rep = msdg.run_verification(["wave"], draws=1)
    assert rep["passed"]
    assert rep["max_ms"] < 1e-10


def test_scheme_rhs_and_energy():
    s = msdg.Scheme("bbm_cnoidal_central_k2", 16)
    y = s.initial_state()
    assert y.shape == (s.state_size,)
    v = s.rhs(0.0, y)
    assert np.all(np.isfinite(v))
    # energy is stationary along the velocity
    h = 1e-6
    dE = (s.energy(y + h * v) - s.energy(y - h * v)) / (2 * h)
    assert abs(dE) < 1e-6 * max(1.0, np.linalg.norm(v))
    x, u = s.sample(s.field(y, 0), 10)
    assert len(x) == len(u) == 160
