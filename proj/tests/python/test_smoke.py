import json

import numpy as np
import pytest

import nlds


def test_grid_and_kernel():
    g = nlds.Grid([32], "dirichlet")
    assert g.size == 32
    assert g.nodes.shape == (32, 1)
    k = nlds.Kernel("triangle", 1, 0.5)
    assert k.symmetric
    assert k(0.0) == pytest.approx(2.0)


def test_neumann_zero_coefficient():
    g = nlds.Grid([64], "neumann")
    k = nlds.Kernel("bump", 1, 0.4)
    r = nlds.principal_point(g, k, 1.0, np.zeros(64))
    assert abs(r["lambda_tilde"]) < 1e-10
    assert r["verdict"] == "exists"
    assert np.allclose(r["eigenfunction"], 1.0)


def test_routes_agree_and_match_numpy():
    g = nlds.Grid([48], "periodic")
    k = nlds.Kernel("cosine", 1, 0.3)
    a = nlds.sine(g, 0.5)
    dense = nlds.principal_point(g, k, 1.0, a)["lambda_tilde"]
    ray = nlds.principal_point(g, k, 1.0, a, route="rayleigh")["lambda_tilde"]
    A = nlds.dispersal_matrix(g, k, 1.0, a)
    assert np.max(np.linalg.eigvals(A).real) == pytest.approx(dense, abs=1e-10)
    assert ray == pytest.approx(dense, abs=1e-10)
    assert nlds.alpha_star(g, k, 1.0, a) == pytest.approx(dense, abs=1e-8)


def test_secular_root():
    g = nlds.Grid([256], "periodic")
    assert nlds.bar_lambda3(g, 1.0, nlds.sine(g, 1.0)) == pytest.approx(np.sqrt(2) - 1, abs=1e-8)


def test_evolve_against_expm():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    g = nlds.Grid([32], "dirichlet")
    k = nlds.Kernel("triangle", 1, 0.3)
    a = nlds.sine(g, 0.5)
    A = nlds.dispersal_matrix(g, k, 1.0, a)
    u0 = np.ones(32)
    u = nlds.evolve(g, k, 1.0, a, u0, 1.0, dt=0.01)
    assert np.max(np.abs(u - scipy_linalg.expm(A) @ u0)) < 1e-8


def test_existence_and_steady_state():
    g = nlds.Grid([32], "neumann")
    k = nlds.Kernel("triangle", 1, 0.3)
    ev = nlds.existence_test(g, k, 1.0, 0.2)
    assert ev["verdict"] == "exists"
    assert len(ev["levels"]) == 3
    r = 1.0 + nlds.sine(g, 0.5)
    v = nlds.steady_state(g, k, 1.0, r, "neumann")
    assert v.min() > 0


def test_config_errors_and_run(tmp_path):
    with pytest.raises(nlds.ConfigError, match="sweep.nu"):
        nlds.run_config(json.dumps({"sweep": {"nu": [2, 1]}}), str(tmp_path))
    cfg = {"experiment": "sweep_nu", "grid": {"nodes": 32}, "sweep": {"nu": [0.5, 1, 2]}}
    code, out, files = nlds.run_config(json.dumps(cfg), str(tmp_path))
    assert code == 0
    assert out.startswith("bc,nu,delta,a_name,n,route,lambda_tilde")
    assert any(f.endswith("sweep_nu.csv") for f in files)


def test_verify_deterministic():
    skip = ["slow", "2d", "random", "determinism", "9"]
    assert nlds.verify(skip=skip) == nlds.verify(skip=skip)
    forced = nlds.verify(skip=skip, tolerance_scale=0.0)
    assert ",fail," in forced
