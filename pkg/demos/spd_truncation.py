"""Sparse Pauli dynamics on a kicked-Ising circuit: accuracy and cost vs threshold."""

import math
import time

import numpy as np

from appbench import sim_dense, sim_spd
from appbench.circuit import build_kicked_ising
from appbench.layout import load_layout, sample_connected_subset

layout = load_layout()
q = sample_connected_subset(layout, 10, 62, np.random.default_rng(2))
c = build_kicked_ising(layout, q, 5, -math.pi / 2, 0.6)
exact = sim_dense.expectation_dense(c)
print(f"dense reference <Z62> = {exact:.10f}")

print(f"{'threshold':>10} {'value':>14} {'error':>10} {'max terms':>10} {'seconds':>8}")
for e in range(1, 9):
    t = 10.0 ** -e
    t0 = time.perf_counter()
    value = sim_spd.expectation_spd(c, threshold=t)
    dt = time.perf_counter() - t0
    peak = max(sim_spd.term_growth_profile(c, threshold=t).num_terms)
    print(f"{t:>10.0e} {value:>14.10f} {abs(value - exact):>10.2e} {peak:>10d} {dt:>8.3f}")
