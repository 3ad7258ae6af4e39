"""Fit the benchmark fidelity model and see how well it predicts kicked-Ising circuits.

A reduced version of the full validation run: fewer cells and trajectories,
so it finishes in well under a minute.  The full run is
``appbench validate`` with its defaults.
"""

import numpy as np

from appbench.analysis import predict_interval
from appbench.layout import load_layout
from appbench.noise import NoiseModel
from appbench.studies import benchmark_records, kicked_ising_records, validate

layout = load_layout()
noise = NoiseModel(0.01)

bench = benchmark_records(layout, [2, 4, 8], range(1, 7), 4, noise, 500, master_seed=1)
ki = kicked_ising_records(layout, 30, 8, 6, noise, 500, master_seed=1)
result = validate(bench, ki)

a, b, c = result.fit.coefficients
print(f"F_eff(x) = {a:.4f} {b:+.4f} x {c:+.4f} x^2   (x = V_lc / N)")
print(f"coverage of kicked-Ising records by the 3-sigma band: {result.coverage:.3f}")

print("\nfirst few kicked-Ising records:")
for r in ki[:8]:
    lo, hi, extrapolated = predict_interval(result.fit, r.x)
    mark = "in " if lo <= r.f_eff <= hi else "out"
    note = " (extrapolated)" if extrapolated else ""
    print(f"  N={r.N:2d} L={r.L} x={r.x:6.2f} F_eff={r.f_eff:.3f} band=[{lo:.3f}, {hi:.3f}] {mark}{note}")

print(f"\nmean F_eff: benchmark {np.mean([r.f_eff for r in bench]):.3f}, "
      f"kicked-Ising {np.nanmean([r.f_eff for r in ki]):.3f}")
