import math
import os
import subprocess

import numpy as np
import pytest

import nvcool

TWO_PI = 2 * math.pi


def test_version_and_names():
    assert nvcool.__version__ == "0.1.0"
    assert {"high-frequency", "low-frequency"} <= set(nvcool.preset_names())
    assert "pump-sweep" in nvcool.experiment_names()


def test_thermal_anchor_and_inverse():
    n = nvcool.thermal_photon_number(TWO_PI * 9.22e9, 293.0)
    assert n == pytest.approx(661.66, abs=0.01)
    assert nvcool.effective_temperature(TWO_PI * 9.22e9, n) == pytest.approx(293.0, rel=1e-12)


def test_pump_rate_round_trip():
    xi = nvcool.pump_rate_from_power(2.0)
    assert nvcool.power_from_pump_rate(xi) == pytest.approx(2.0, rel=1e-12)
    assert nvcool.pump_rate_from_power(4.0) == pytest.approx(2 * xi, rel=1e-12)


def test_params_overrides():
    p = nvcool.params("high-frequency", {"resonator.n_spins": 4e14})
    value, unit = p["resonator.n_spins"]
    assert value == 4e14 and unit == ""
    with pytest.raises(nvcool.DomainError):
        nvcool.params("high-frequency", {"resonator.kappa": -1.0})


def test_dicke_numbers():
    d = nvcool.dicke_numbers(0.73, 0.13, 4e13)
    assert d["J"] / 4e13 == pytest.approx(0.3488, abs=1e-3)
    assert d["J0"] == 2e13
    assert not d["clamped"]


def test_models_cool_below_bath_and_cumulant_is_warmer():
    nth = nvcool.thermal_photon_number(TWO_PI * 9.22e9, 293.0)
    nc = nvcool.steady_photon_number(power=2.0, model="cumulant")
    nr = nvcool.steady_photon_number(power=2.0, model="rate")
    assert 0 < nr < nc < nth


def test_run_returns_numpy_tables():
    r = nvcool.run("pump-sweep", set=["sweep.points=5", "run.models=cumulant"])
    sweep = r["tables"]["sweep"]
    assert isinstance(sweep["xi_Hz"], np.ndarray)
    assert sweep["xi_Hz"].shape == (5,)
    assert np.all(sweep["photon_n_cumulant"] > 0)
    assert r["summary"]["cumulant.min_T_eff_K"] == sweep["T_eff_K_cumulant"].min()
    assert np.all(np.diff(sweep["xi_Hz"]) > 0)
    assert len(r["config_hash"]) == 16


def test_config_errors_carry_line_numbers():
    with pytest.raises(nvcool.ConfigError, match="line 3"):
        nvcool.run("cool-dynamics", "[schedule]\npower = 2 W\nbogus = 1\n")
    with pytest.raises(nvcool.ConfigError):
        nvcool.run("cool-dynamics", "[run]\nexperiment = pump-sweep\n")


def test_in_process_cli():
    code, out, _ = nvcool.cli(["params", "show", "high-frequency"])
    assert code == 0 and "resonator.kappa" in out
    assert nvcool.cli(["no-such-command"])[0] == 1


@pytest.mark.skipif(not os.environ.get("NVCOOL_CLI"), reason="CLI binary path not provided")
def test_cli_binary_writes_outputs(tmp_path):
    cmd = [os.environ["NVCOOL_CLI"], "pump-sweep", "-s", "sweep.points=3", "-o", str(tmp_path), "-q"]
    assert subprocess.run(cmd, check=False).returncode == 0
    assert (tmp_path / "pump-sweep.csv").exists()
    assert (tmp_path / "pump-sweep.json").exists()
