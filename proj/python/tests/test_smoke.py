import math

import numpy as np
import pytest

import onlinecp


def test_generate_shape_and_coefficients():
    X, y = onlinecp.generate(seed=1)
    assert X.shape == (600, 100)
    assert y.shape == (600,)
    beta = onlinecp.coefficients(100)
    assert beta[0] == 10 and beta[1] == -10 and beta[10] == 1 and beta[11] == -1


def test_gauss_thresholds():
    X, y = onlinecp.generate(seed=2)
    result = onlinecp.run_online(X, y, predictor="gauss")
    assert result["length"].shape == (600, 3)
    assert np.all(np.isinf(result["length"][:102]))
    for eps in (0.05, 0.01, 0.005):
        assert onlinecp.first_bounded_step(result, eps) == 103
        assert onlinecp.first_finite_median_step(result, eps) == 205
    assert result["ledger_csv"].startswith("n,err_0.05,Err_0.05,L_0.05,M_0.05")


def test_smoothed_run_is_deterministic_and_valid():
    X, y = onlinecp.generate(features=2, observations=400, seed=3)
    a = onlinecp.run_online(X, y, predictor="mva", epsilons=[0.1], smoothed=True, seed=5)
    b = onlinecp.run_online(X, y, predictor="mva", epsilons=[0.1], smoothed=True, seed=5)
    assert a["p_values"] == b["p_values"]
    assert all(0.0 <= p <= 1.0 for p in a["p_values"])
    outcome, _, _ = onlinecp.uniformity_test(a["p_values"], a["taus"])
    assert outcome in ("pass", "fail")
    lo, hi = onlinecp.binomial_band(400, 0.1)
    assert lo <= a["cumulative"][-1, 0] <= hi


def test_predictor_interface():
    X, y = onlinecp.generate(features=2, observations=30, seed=4)
    for kind in ("iid", "gauss", "mva", "iid-gauss", "wilks"):
        p = onlinecp.Predictor(kind, 2, mc_samples=200)
        for x, target in zip(X, y):
            f = p.forecast(x)
            wide = f.region(0.2)
            narrow = f.region(0.05)
            assert wide.is_subset_of(narrow)
            assert 0.0 <= f.p_value(target) <= 1.0
            p.update(x, target)
        assert p.count == 30
        assert p.kind == kind


def test_region_values():
    p = onlinecp.Predictor("gauss", 1)
    for v in (0.0, 1.0, 2.0, 3.0):
        p.update(np.array([v]), v)
    r = p.forecast(np.array([4.0])).region(0.05)
    assert r.lower == r.upper == pytest.approx(4.0)
    assert 4.0 in r


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(onlinecp.UsageError):
        onlinecp.Predictor("bogus", 2)
    with pytest.raises(onlinecp.UsageError):
        onlinecp.run_online(np.zeros((3, 1)), np.zeros(3), epsilons=[0.01, 0.05])
    with pytest.raises(onlinecp.DataError):
        onlinecp.read_stream(str(tmp_path / "missing.csv"))
    with pytest.raises(onlinecp.NumericalError):
        onlinecp.run_online(np.full((6, 1), 2.0), np.arange(6.0), predictor="gauss")


def test_stream_round_trip(tmp_path):
    X, y = onlinecp.generate(features=3, observations=20, seed=6)
    path = str(tmp_path / "data.csv")
    onlinecp.write_stream(path, X, y)
    X2, y2 = onlinecp.read_stream(path)
    assert np.array_equal(X, X2)
    assert np.array_equal(y, y2)


def test_student_t():
    assert onlinecp.t_upper_point(0.025, 7) == pytest.approx(2.364624251592785, abs=1e-10)
    assert onlinecp.t_cdf(0.0, 5) == 0.5
    assert math.isclose(onlinecp.t_sf(1.0, 1), 0.25, rel_tol=1e-12)
