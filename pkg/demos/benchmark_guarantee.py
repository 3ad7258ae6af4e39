"""Generate a few benchmark circuits on the 127-qubit heavy-hex device and check <O> = +1.

Each circuit is a Clifford ansatz whose letters are chosen so the prepared
state is a +1 eigenstate of the measured observable.  The stabilizer engine
confirms that exactly, and the dense engine agrees on the small ones.
"""

import math

import numpy as np

from appbench import sim_clifford, sim_dense
from appbench.bench_gen import generate_benchmark_circuit
from appbench.circuit import build_ansatz
from appbench.layout import lightcone_volume, load_layout, sample_connected_subset
from appbench.pauli import PauliString

layout = load_layout()
rng = np.random.default_rng(0)
obs = PauliString.from_sites(127, {62: "Z"})

print(f"{'N':>4} {'L':>3} {'V_lc':>6} {'stabilizer':>11} {'dense':>8}")
for n, L in [(4, 3), (8, 5), (12, 10), (32, 15), (127, 15)]:
    q = sample_connected_subset(layout, n, 62, rng)
    c = generate_benchmark_circuit(build_ansatz(layout, q, L, math.pi / 2), obs, rng)
    stab = sim_clifford.expectation(c)
    dense = f"{sim_dense.expectation_dense(c):.6f}" if n <= 12 else "-"
    print(f"{n:>4} {L:>3} {lightcone_volume(c, obs):>6} {stab:>11.1f} {dense:>8}")
