import json
import math
import os

import numpy as np
import pytest

import whitham


def test_symbol_and_speed():
    assert whitham.khat(0.0) == 1.0
    assert whitham.khat(2.0) == pytest.approx(math.tanh(2.0) / 2.0, rel=1e-15)
    assert whitham.c_kappa(1.0) == pytest.approx(math.sqrt(math.tanh(1.0)), rel=1e-15)


def test_positive_branch_point():
    c, phi = whitham.positive_branch_point(1.0)
    assert c == pytest.approx(1.11834, abs=5e-6)
    assert phi == pytest.approx(0.15677, abs=5e-6)
    assert c * c - 1 - 1.5 * c * phi + 0.5 * phi * phi == pytest.approx(0.0, abs=1e-12)


@pytest.fixture(scope="module")
def hp_branch():
    return whitham.continue_branch("hp", kappa=1.0, n_points=64, max_height=0.2)


def test_branch(hp_branch):
    b = hp_branch
    assert b.stop_reason == "MAX_HEIGHT"
    assert len(b) == len(b.c) == len(b.waveheight)
    assert b.c[0] == pytest.approx(whitham.c_kappa(1.0), rel=1e-8)
    assert np.all(np.diff(b.waveheight[5:]) > 0)
    i = len(b) // 2
    p = b.sample([b.waveheight[i]])[0]
    assert isinstance(p, whitham.Point)
    assert p.values.shape == (64,)
    assert p.c == pytest.approx(b.c[i], rel=1e-12)
    assert np.abs(p.values - b.points[i].values).max() < 1e-11


def test_sample_out_of_range(hp_branch):
    with pytest.raises(whitham.ValidationError, match="range"):
        hp_branch.sample([5.0])


def test_spectrum_small_wave(hp_branch):
    p = hp_branch.sample([0.01])[0]
    s = whitham.spectrum("hp", 1.0, p, n_modes=20, dmu=0.01)
    assert len(s["mu"]) == 100
    assert s["full_mesh"]
    assert not any(s["flags"].values())
    assert len(s["eigenvalues"][0]) == 2 * (2 * 20 + 1)


def test_evolve_short():
    b = whitham.continue_branch("ej", kappa=1.0, n_points=64, max_height=0.06)
    p = whitham.refine("ej", 1.0, b.sample([0.05])[0], 256, 0.05)
    r = whitham.evolve("ej", 1.0, p, t_final=0.5, dt=1e-3, snapshot_every=100)
    assert not r["blew_up"]
    assert r["t"][-1] == pytest.approx(0.5)
    assert r["l2_residual"][-1] < 1e-6
    # full period from the half-period grid
    assert r["u"].shape == r["eta"].shape == (512,)
    assert whitham.tail_energy(np.zeros(8), 0.25) == 0.0


def test_run_command(tmp_path):
    out = tmp_path / "bp"
    r = whitham.run("branch-point", {"model": "ej-positive", "output_dir": str(out)})
    assert r["exit_code"] == 0
    assert "c_star = 1.11834" in r["log"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert {a["name"] for a in manifest["artifacts"]} <= set(os.listdir(out))


def test_run_errors(tmp_path):
    with pytest.raises(whitham.ValidationError):
        whitham.run("bifurcate", {"n_points": "8"})
    with pytest.raises(whitham.ValidationError, match="accepted keys"):
        whitham.run("bifurcate", {"bogus": "1"})
    r = whitham.run("sample", {"model": "hp", "heights": "5", "max_height": "0.02", "output_dir": str(tmp_path / "r")})
    assert r["exit_code"] == 2
    assert json.loads(r["error"])["error"] == "range"
