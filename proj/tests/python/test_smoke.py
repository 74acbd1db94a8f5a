import math
import os
from pathlib import Path

import numpy as np
import pytest

import brng

TWO_PI_GHZ = 2 * math.pi * 1e9
DATA = Path(os.environ.get("BRNG_TEST_DATA_DIR", Path(__file__).resolve().parents[1] / "data"))


@pytest.fixture
def ref():
    return brng.reference_params()


def test_derived_rates_and_thresholds(ref):
    d = brng.derived_rates(ref)
    assert d["delta_omega"] / TWO_PI_GHZ == pytest.approx(10.807, abs=5e-4)
    t = brng.thresholds(ref)
    assert t["j_b"] == pytest.approx(1211.6, rel=1e-3)
    assert brng.regime_report(ref)["criterion_ratio"] == pytest.approx(3.555, rel=1e-3)


def test_window_matches_thresholds(ref):
    lo, hi = brng.bistable_window(ref)
    t = brng.thresholds(ref)
    assert lo == pytest.approx(t["omega_ex"], rel=1e-6)
    assert hi == pytest.approx(t["omega_th"], rel=1e-6)


def test_params_from_config():
    p = brng.params_from_config({
        "gamma1": 0.191, "gamma2": 0.191, "gamma_b": 1.2, "domega1": 1.58,
        "domega2": -10.59, "omega_b": 12.17, "g": 0.0159, "nbar": 513,
        "omega_pump1": {"relative_to": "omega_th", "factor": 0.5},
    })
    assert p.gamma_b == pytest.approx(1.2 * TWO_PI_GHZ)
    assert p.omega_pump1 == pytest.approx(0.5 * brng.thresholds(p)["omega_th"])


def test_simulate_is_seeded(ref):
    ref.omega_pump1 = 0.8 * brng.thresholds(ref)["omega_th"]
    a = brng.simulate(ref, dt=1e-12, n_steps=20000, record_stride=100, seed=3)
    b = brng.simulate(ref, dt=1e-12, n_steps=20000, record_stride=100, seed=3)
    c = brng.simulate(ref, dt=1e-12, n_steps=20000, record_stride=100, seed=4)
    assert a["data"].shape == (200, 3)
    assert np.array_equal(a["data"], b["data"])
    assert not np.array_equal(a["data"], c["data"])


def test_trace_statistics_on_square_wave():
    x = np.tile(np.r_[np.full(50, 1.0), np.full(50, 9.0)], 40)
    b = brng.find_boundary(x, "balance-median")
    assert brng.occupancy(x, 5.0) == {"p_ng": 0.5, "p_g": 0.5}
    d = brng.dwell_times(x, 1e-9, 5.0, mode_separation=8.0)
    assert d["tau_ng"] == pytest.approx(50e-9)
    assert d["tau_g"] == pytest.approx(50e-9)
    assert b == 1.0
    dist = brng.empirical_distribution(x, 10)
    assert dist["cdf"][-1] == pytest.approx(1.0)


def test_sampling_frequency():
    assert brng.sampling_frequency(1.0, 1.0) == pytest.approx(1 / (4 * math.log(2)))


def test_generate_and_round_trip(ref, tmp_path):
    th = brng.thresholds(ref)["omega_th"]
    balance = {
        "omega1_star": 0.8 * th, "omega2": 0.0, "p_g_at_star": 0.5, "p_g_halfwidth": 0.0,
        "tolerance": 0.03, "tau": 3e-8, "tau_stderr": 0.0, "tau_ng": 3e-8, "tau_g": 3e-8,
        "half_life": 3e-8 * math.log(2), "boundary": 5000.0, "discriminator_boundary": 5000.0,
        "n_transitions": 0, "converged": True, "lifetimes_equal": True, "seed": 0,
    }
    bits, meta = brng.generate_bits(ref, balance, 64, seed=5, burn_in_time=1e-8)
    assert bits.dtype == np.uint8 and len(bits) == 64
    assert meta["ones_fraction"] == pytest.approx(bits.mean())
    path = tmp_path / "bits.bin"
    brng.export_bits(path, bits, "packed", f_s=meta["f_s"])
    back, m2 = brng.import_bits(path)
    assert np.array_equal(back, bits)
    assert m2["f_s"] == pytest.approx(meta["f_s"])


def test_nist_on_corpus():
    raw = np.frombuffer((DATA / "e_1M.bin").read_bytes(), dtype=np.uint8)
    bits = np.unpackbits(raw)[:100000]
    r = brng.nist_test(bits, "frequency")
    assert 0.0 <= r["worst_p"] <= 1.0
    suite = brng.nist_suite(bits)
    assert suite["executed"] + len(suite["skipped"]) == 15
    assert "Frequency" in brng.nist_table(bits)


def test_errors_surface_as_exceptions():
    with pytest.raises(RuntimeError):
        brng.nist_test(np.zeros(10, dtype=np.uint8), "frequency")
