import math

import numpy as np
import pytest

from appbench.analysis import (DegenerateIdealError, FidelityRecord, FitError, FitResult, coverage,
                               effective_fidelity, effective_volume, fit_quadratic, fit_quadratic_xy,
                               predict_interval, records_from_csv, records_to_csv)
from appbench.layout import load_layout
from appbench.noise import NoiseModel
from appbench.studies import benchmark_records


def test_effective_fidelity_examples():
    assert effective_fidelity(0.5, 1.0) == 0.5
    assert effective_fidelity(1.0, 1.0) == 1.0
    with pytest.raises(DegenerateIdealError):
        effective_fidelity(0.3, 1e-9)
    rec = FidelityRecord.make("c", "kicked_ising", 4, 2, 6, 0.3, 1e-9, 0, 10)
    assert rec.flag == "degenerate_ideal" and math.isnan(rec.f_eff)


def test_effective_volume_examples():
    eps = 0.01
    assert effective_volume(1.0, eps) == 0.0
    assert effective_volume(math.exp(-100 * eps), eps) == pytest.approx(100.0, abs=1e-9)
    assert effective_volume(math.exp(-1), 0.01) == pytest.approx(100.0, abs=1e-9)
    with pytest.raises(ValueError):
        effective_volume(0.0, eps)
    with pytest.raises(ValueError):
        effective_volume(0.5, 0.0)


def test_exact_quadratic_recovered():
    x = np.linspace(0, 5, 50)
    fit = fit_quadratic_xy(x, 0.9 - 0.05 * x + 0.003 * x ** 2)
    assert np.allclose(fit.coefficients, (0.9, -0.05, 0.003), atol=1e-9)
    assert np.all(fit.bin_sigmas < 1e-9)
    lo, hi, ext = predict_interval(fit, 2.0)
    assert hi - lo == pytest.approx(0.0, abs=1e-9) and not ext


def test_constant_data():
    fit = fit_quadratic_xy(np.arange(10.0), np.full(10, 0.7))
    assert np.allclose(fit.coefficients, (0.7, 0.0, 0.0), atol=1e-9)


def test_rank_deficient():
    with pytest.raises(FitError):
        fit_quadratic_xy([1.0, 1.0, 1.0, 1.0], [0.1, 0.2, 0.3, 0.4])
    with pytest.raises(FitError):
        fit_quadratic_xy([1.0, 2.0], [0.1, 0.2])


def test_bin_sigmas_track_noise_level():
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 4, 1000)
    y = 1 - 0.02 * x - 0.001 * x ** 2 + rng.normal(0, 0.01, x.size)
    fit = fit_quadratic_xy(x, y)
    idx = np.array([fit.bin_index(v) for v in x])
    filled = [b for b in range(100) if np.sum(idx == b) >= 2]
    ok = [0.005 <= fit.bin_sigmas[b] <= 0.02 for b in filled]
    assert np.mean(ok) >= 0.9


def test_interval_width_at_known_sigma():
    fit = FitResult((0.5, 0.0, 0.0), np.linspace(0, 1, 101), np.full(100, 0.02))
    lo, hi, ext = predict_interval(fit, 0.37)
    assert hi - lo == pytest.approx(0.12, abs=1e-12) and not ext
    assert predict_interval(fit, 1.5).extrapolated


def test_sparse_bins_borrow_nearest_sigma():
    x = np.array([0.0, 0.001, 0.5, 1.0, 1.001])
    y = np.array([1.0, 1.02, 0.5, 0.2, 0.21])
    fit = fit_quadratic_xy(x, y)
    assert fit.bin_sigmas[1] == fit.bin_sigmas[0]
    assert fit.bin_sigmas[60] == fit.bin_sigmas[99]


def _records(rng, k):
    out = []
    for i in range(k):
        n = int(rng.integers(2, 12))
        v = int(rng.integers(0, 40))
        ideal = 1.0
        out.append(FidelityRecord.make(f"r{i}", "benchmark", n, 3, v,
                                       math.exp(-0.01 * v) + rng.normal(0, 0.01), ideal, i, 100))
    return out


def test_shuffle_invariance():
    rng = np.random.default_rng(1)
    recs = _records(rng, 300)
    a = fit_quadratic(recs)
    perm = rng.permutation(len(recs))
    b = fit_quadratic([recs[i] for i in perm])
    assert np.allclose(a.coefficients, b.coefficients, atol=1e-12, rtol=0)
    assert np.allclose(a.bin_sigmas, b.bin_sigmas, atol=1e-12, rtol=0)


def test_flagged_records_rejected_and_skipped():
    rng = np.random.default_rng(2)
    recs = _records(rng, 50)
    bad = FidelityRecord.make("bad", "kicked_ising", 4, 2, 6, 0.3, 0.0, 0, 10)
    with pytest.raises(FitError):
        fit_quadratic(recs + [bad])
    fit = fit_quadratic(recs)
    assert coverage(fit, recs + [bad]) == coverage(fit, recs)


def test_coverage_counts_band_membership():
    fit = FitResult((0.5, 0.0, 0.0), np.linspace(0, 1, 101), np.full(100, 0.01))
    recs = [FidelityRecord("a", "k", 2, 1, 1, 0.5, 0.52, 1.0, 0.52),
            FidelityRecord("b", "k", 2, 1, 1, 0.5, 0.6, 1.0, 0.6)]
    assert coverage(fit, recs) == 0.5


def test_csv_and_json_roundtrip():
    rng = np.random.default_rng(3)
    recs = _records(rng, 20) + [FidelityRecord.make("bad", "kicked_ising", 4, 2, 6, 0.3, 0.0, 9, 10)]
    text = records_to_csv(recs)
    assert text.splitlines()[0] == "circuit_id,family,N,L,v_lc,x,measured,ideal,f_eff,flag,seed,trajectories"
    back = records_from_csv(text)
    assert back[:-1] == recs[:-1]
    assert back[-1].flag == "degenerate_ideal" and math.isnan(back[-1].f_eff)
    fit = fit_quadratic(recs[:-1])
    again = FitResult.from_dict(__import__("json").loads(fit.to_json()))
    assert again.coefficients == fit.coefficients
    assert np.array_equal(again.bin_sigmas, fit.bin_sigmas)
    assert np.array_equal(again.bin_edges, fit.bin_edges)


def test_log_fidelity_grows_with_lightcone():
    recs = benchmark_records(load_layout(), [4, 12], range(1, 7), 3, NoiseModel(0.02), 500, 5)
    v = np.array([r.v_lc for r in recs], dtype=float)
    y = np.array([-math.log(max(r.f_eff, 1e-3)) for r in recs])
    assert np.polyfit(v, y, 1)[0] > 0
