"""Hard circuits: Pauli-set growth under greedy filling, and two-qubit entanglement.

The greedy filler picks, gate by gate from the end of the circuit, the
letters that anticommute with as many tracked Paulis as possible.  Compare
the set size against random filling of the same skeletons, then compare
the entanglement the two circuit families generate on a small region.
"""

import math

import numpy as np

from appbench.circuit import build_ansatz
from appbench.hard_gen import generate_hard_circuit, set_growth_trace
from appbench.layout import load_layout, sample_connected_subset
from appbench.pauli import PauliString
from appbench.studies import entropy_study

layout = load_layout()
obs = PauliString.from_sites(127, {62: "Z"})

print("mean final |S| over 8 random 10-qubit regions, L=2:")
for brute in (0, 2):
    finals = []
    for seed in range(8):
        rng = np.random.default_rng(seed)
        sk = build_ansatz(layout, sample_connected_subset(layout, 10, 62, rng), 2, math.pi / 4)
        sizes, _ = set_growth_trace(generate_hard_circuit(sk, obs, brute, rng).circuit(), obs)
        finals.append(sizes[-1])
    label = "greedy" if brute else "random"
    print(f"  {label} filling: {np.mean(finals):.0f}")

print("\nmean two-qubit entropy at L=3 (20 instances per N):")
rows = entropy_study(layout, [4, 6, 8], 3, 20, master_seed=3)
for r in rows:
    print(f"  {r.family:13s} N={r.N:2d}  {r.mean:.3f} +/- {r.std:.3f}")
