import math

import pytest

import onebit


def test_contour_anchor():
    r = onebit.capacity(2.07, 3.4)
    assert abs(r["c_avg"] - 0.80) <= 0.01
    assert 0.0 <= r["q"] <= 1.0
    assert r["residual"] <= 1e-10
    assert onebit.capacity_complex(2.07, 3.4) == 2.0 * r["c_avg"]


def test_db_matches_linear():
    assert onebit.capacity_db(10.0, 1.0)["c_avg"] == pytest.approx(onebit.capacity(10.0, 1.0)["c_avg"], abs=1e-14)


def test_single_transceiver_limits():
    assert onebit.single_transceiver_capacity(0.0) == 0.0
    assert onebit.single_transceiver_capacity(1e12) == pytest.approx(1.0, abs=1e-4)


def test_threshold_and_regimes():
    assert abs(onebit.saturation_alpha() - 1.24) <= 0.02
    assert onebit.high_snr_capacity(2.0)["c_avg"] == 1.0
    low = onebit.low_snr_capacity(0.1, 1.0)
    assert low["regime"] == "low-snr"
    assert low["c_avg"] == pytest.approx(onebit.capacity(0.1, 1.0)["c_avg"], rel=0.05)


def test_exact_single_pair_and_distribution():
    est = onebit.exact_capacity(1, 1, 1.0, channels=10, seed=3)
    assert est["mean"] == pytest.approx(onebit.single_transceiver_capacity(1.0), abs=1e-12)
    assert len(est["per_channel"]) == 10
    p = onebit.output_distribution([[1.0, -0.5], [0.3, 2.0]], 1.0)
    assert len(p) == 4
    assert math.fsum(p) == pytest.approx(1.0, abs=1e-14)


def test_exact_reproducible():
    a = onebit.exact_capacity(2, 3, 2.0, channels=8, seed=5, threads=1)
    b = onebit.exact_capacity(2, 3, 2.0, channels=8, seed=5, threads=2)
    assert a["per_channel"] == b["per_channel"]


def test_sweep_and_contour():
    cells = onebit.sweep([0.5, 1.0], [1.0, 2.0])
    assert [(c["rho"], c["alpha"]) for c in cells] == [(0.5, 1.0), (1.0, 1.0), (0.5, 2.0), (1.0, 2.0)]
    assert all(c["error"] is None for c in cells)
    pt = onebit.contour_point(0.8, 3.4)
    assert pt["rho"] == pytest.approx(2.07, abs=0.05)
    assert onebit.contour_point(0.8, 0.5)["rho"] is None


def test_errors():
    with pytest.raises(ValueError):
        onebit.capacity(-1.0, 1.0)
    with pytest.raises(onebit.FeasibilityError):
        onebit.exact_capacity(21, 30, 1.0, channels=2)
    with pytest.raises(ValueError):
        onebit.snr_for_contour_approx(0.1, 5.0)
