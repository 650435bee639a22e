"""End-to-end runs of the command-line application."""

import io
import json

import numpy as np
import pandas as pd
import pytest

from ybfaraday.cli import run
from ybfaraday.cli.commands import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION
from ybfaraday.config import get_settings
from ybfaraday.utils.series import metadata_path


def _fit(tmp_path, model, data):
    out = tmp_path / f"{model}.json"
    status = run(["fit", model, "--data", str(data), "--out", str(out)])
    return status, json.loads(out.read_text(encoding="utf-8"))


def test_constants(capsys):
    assert run(["constants"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sigma0 7.598e-14" in out
    assert "F'=3/2: +832.4" in out
    assert "F'=5/2: -255.0" in out


def test_strengths(capsys):
    assert run(["strengths", "--spin", "1/2", "--pol", "sigma+"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "1/3" in out and "2/3" in out

    assert run(["strengths", "--coefficients"]) == EXIT_OK
    assert "sum rule" in capsys.readouterr().out


def test_unpolarized_rotation_is_zero(tmp_path):
    out = tmp_path / "rotation.csv"
    assert run(["rotation", "--isotope", "171", "--p", "0", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["detuning_MHz", "phi_rad"]
    assert len(frame) == 3001
    assert np.all(np.abs(frame["phi_rad"]) < 1e-12)
    assert metadata_path(out).exists()


def test_polarized_rotation_to_stdout(capsys):
    args = ["rotation", "--isotope", "173", "--p", "1", "--from", "-500", "--to", "800", "--step", "5"]
    assert run(args) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame["detuning_MHz"].iloc[0] == pytest.approx(-500.0)
    assert frame["detuning_MHz"].iloc[-1] == pytest.approx(800.0)
    assert np.max(np.abs(frame["phi_rad"])) > 1e-3


def test_spectrum_then_absorption_fit(tmp_path):
    data = tmp_path / "spectrum.csv"
    assert run(["spectrum", "--out", str(data), "--noise", "0.01", "--seed", "3"]) == EXIT_OK
    status, report = _fit(tmp_path, "absorption", data)
    assert status == EXIT_OK
    assert report["converged"]
    assert report["named"]["gamma_star_mhz"] == pytest.approx(57.0, rel=0.02)
    assert report["isotope_columns"]["171"] == pytest.approx(0.18, rel=0.05)


def test_release_then_exponential_fit(tmp_path):
    data = tmp_path / "release.csv"
    assert run(["release", "--out", str(data), "--noise", "0.01", "--seed", "1"]) == EXIT_OK
    status, report = _fit(tmp_path, "exp", data)
    assert status == EXIT_OK
    assert report["named"]["decay_time"] == pytest.approx(2.2e-3, rel=0.05)


def test_precess_then_sinusoid_fit(tmp_path):
    data = tmp_path / "precess.csv"
    assert run(["precess", "--out", str(data), "--noise", "0.02", "--seed", "2"]) == EXIT_OK
    meta = json.loads(metadata_path(data).read_text(encoding="utf-8"))
    assert meta["larmor_khz"] == pytest.approx(2.625)

    status, report = _fit(tmp_path, "sinusoid", data)
    assert status == EXIT_OK
    assert report["larmor_khz"] == pytest.approx(2.625, rel=0.01)


def test_same_seed_writes_identical_files(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for target in (a, b):
        assert run(["release", "--out", str(target), "--noise", "0.05", "--seed", "42"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert metadata_path(a).read_bytes() == metadata_path(b).read_bytes()


def test_pump_to_stdout(capsys):
    assert run(["pump", "--isotope", "171", "--intensity", "0.01", "--duration", "20"]) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ["time_s", "m=-1/2", "m=1/2", "p"]
    assert frame["p"].iloc[-1] > 0.99


def test_estimates_with_json(tmp_path, capsys):
    out = tmp_path / "fort.json"
    assert run(["estimates", "--kind", "fort", "--out", str(out)]) == EXIT_OK
    assert "larmor_khz 2.625" in capsys.readouterr().out
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["kind"] == "fort"
    assert 190.0 <= payload["estimates"]["nsigma"] <= 230.0


def test_scenario_file(tmp_path, capsys):
    scenario = tmp_path / "mot.json"
    scenario.write_text(json.dumps({"kind": "mot", "decay_time_ms": 4.4}), encoding="utf-8")
    assert run(["estimates", "--scenario", str(scenario)]) == EXIT_OK
    assert "expansion_velocity_m_s 0.113636" in capsys.readouterr().out


def test_report(tmp_path):
    out = tmp_path / "anchors.html"
    assert run(["report", "--out", str(out)]) == EXIT_OK
    assert "14 of 14 anchors within tolerance" in out.read_text(encoding="utf-8")


def test_usage_errors():
    assert run(["transmogrify"]) == EXIT_USAGE
    assert run(["fit", "absorption"]) == EXIT_USAGE
    assert run(["--version"]) == EXIT_OK


def test_validation_errors(tmp_path):
    assert run(["rotation", "--p", "2"]) == EXIT_VALIDATION
    assert run(["rotation", "--from", "10", "--to", "0"]) == EXIT_VALIDATION
    assert run(["fit", "exp", "--data", str(tmp_path / "absent.csv")]) == EXIT_VALIDATION

    scenario = tmp_path / "beam.json"
    scenario.write_text(json.dumps({"kind": "beam", "velocity_m_s": -1}), encoding="utf-8")
    assert run(["spectrum", "--scenario", str(scenario)]) == EXIT_VALIDATION
    assert run(["release", "--scenario", str(scenario)]) == EXIT_VALIDATION


def test_invalid_settings(monkeypatch):
    monkeypatch.setenv("YBFARADAY_LOG_LEVEL", "chatty")
    assert run(["constants"]) == EXIT_VALIDATION


def test_fit_without_convergence(tmp_path, monkeypatch):
    data = tmp_path / "release.csv"
    assert run(["release", "--out", str(data), "--noise", "0.02", "--seed", "8"]) == EXIT_OK
    monkeypatch.setenv("YBFARADAY_FIT_MAX_ITERATIONS", "1")
    get_settings.cache_clear()
    status, report = _fit(tmp_path, "exp", data)
    assert status == EXIT_NOT_CONVERGED
    assert not report["converged"]
