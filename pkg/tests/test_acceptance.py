"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from appbench import sim_clifford, sim_dense, sim_spd
from appbench.bench_gen import generate_benchmark_circuit
from appbench.circuit import build_ansatz, build_kicked_ising
from appbench.hard_gen import generate_hard_circuit, set_growth_trace
from appbench.layout import (QubitSubset, lightcone_volume, sample_connected_subset,
                             two_qubit_gate_count)
from appbench.noise import NoiseModel
from appbench.pauli import PauliString, PauliSum, conjugate_by_rotation
from appbench.studies import benchmark_records, circuit_seed, entropy_study, kicked_ising_records, validate

from circuits import lightcone_case, random_circuit, random_letters
from oracles import brute_force_cone, pauli_sum_matrix, rotation_matrix

TERM_CAP = 1 << 20


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def test_1_benchmark_guarantee(heavy_hex, report):
    t0 = time.time()
    sizes = (2, 4, 8, 16, 32, 64, 127)
    values = []
    for i in range(1000):
        rng = np.random.default_rng(circuit_seed(2024, "benchmark", i))
        n = sizes[i % len(sizes)]
        L = int(rng.integers(1, 16))
        q = sample_connected_subset(heavy_hex, n, int(rng.integers(127)), rng)
        if i % 2:
            members = q.sorted()
            picks = rng.choice(members, size=min(len(members), int(rng.integers(1, 4))), replace=False)
            obs = PauliString.from_sites(127, {int(m): random_letters(rng, 1) for m in picks})
            obs = -obs if rng.random() < 0.5 else obs
        else:
            obs = PauliString.from_sites(127, {q.anchor: "Z"})
        c = generate_benchmark_circuit(build_ansatz(heavy_hex, q, L, math.pi / 2), obs, rng)
        values.append(sim_clifford.expectation(c, obs))
    elapsed = time.time() - t0
    bad = sum(v != 1 for v in values)
    report(1, "benchmark circuits give <O> = +1", bad == 0 and elapsed < 300,
           f"{1000 - bad}/1000 exactly +1 in {elapsed:.1f} s (target < 300 s)")


def test_2_cross_engine(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 11))
        c = random_circuit(rng, n, int(rng.integers(0, 60)))
        stab = sim_clifford.expectation(c)
        dense = sim_dense.expectation_dense(c)
        spd = sim_spd.expectation_spd(c, threshold=0.0)
        worst = max(worst, abs(stab - dense), abs(stab - spd), abs(dense - spd))
    report(2, "stabilizer/dense/SPD agree on Clifford circuits", worst <= 1e-8,
           f"max deviation {worst:.2e} over 200 circuits (tolerance 1e-8)")


def test_3_rotation_conjugation(report):
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(1000):
        n = int(rng.integers(1, 4))
        obs = PauliSum(n)
        for _ in range(int(rng.integers(1, 5))):
            obs.add(PauliString.from_label(random_letters(rng, n, "IXYZ")).key, float(rng.normal()))
        p = PauliString.from_label(random_letters(rng, n, "IXYZ"))
        p = -p if rng.random() < 0.5 else p
        theta = (float(rng.integers(-4, 5)) * math.pi / 2 if i % 5 == 0
                 else float(rng.uniform(-2 * math.pi, 2 * math.pi)))
        u = rotation_matrix(n, range(n), p.to_label(with_sign=False), theta * p.sign)
        expected = u @ pauli_sum_matrix(obs) @ u.conj().T
        got = pauli_sum_matrix(conjugate_by_rotation(obs, p, theta))
        worst = max(worst, float(np.max(np.abs(got - expected))))
    report(3, "rotation conjugation matches dense conjugation", worst <= 1e-12,
           f"max entry error {worst:.2e} over 1000 triples (tolerance 1e-12)")


def test_4_layout_facts(heavy_hex, report):
    colors_ok = all(len({q for e in heavy_hex.edges_of_color(c) for q in e})
                    == 2 * len(heavy_hex.edges_of_color(c)) for c in (1, 2, 3))
    ki = build_kicked_ising(heavy_hex, QubitSubset(frozenset(range(127)), 62), 20, -math.pi / 2, math.pi / 4)
    gates = two_qubit_gate_count(ki)
    rng = np.random.default_rng(9)
    matches = 0
    for _ in range(100):
        circ, supports, obs_sites = lightcone_case(rng)
        matches += lightcone_volume(circ, circ.observable) == brute_force_cone(
            circ.num_qubits, supports, obs_sites, rng)
    ok = len(heavy_hex.edges) == 144 and colors_ok and gates == 2880 and matches == 100
    report(4, "layout facts and lightcone oracle", ok,
           f"{len(heavy_hex.edges)} edges, matchings {colors_ok}, {gates} two-qubit gates at L=20, "
           f"lightcone oracle {matches}/100")


def test_5_fidelity_fit_predicts_kicked_ising(heavy_hex, report):
    t0 = time.time()
    noise = NoiseModel(0.01)
    bench = benchmark_records(heavy_hex, [2, 4, 8, 12], range(1, 11), 10, noise, 2000, 1)
    ki = kicked_ising_records(heavy_hex, 300, 12, 10, noise, 2000, 1)
    result = validate(bench, ki)
    elapsed = time.time() - t0
    usable = sum(1 for r in ki if not r.flag)
    report(5, "3-sigma band from benchmark fit covers kicked-Ising records",
           result.coverage >= 0.90 and usable == 300,
           f"coverage {result.coverage:.3f} of {usable} records (need >= 0.90), "
           f"fit {tuple(round(a, 5) for a in result.fit.coefficients)}, {elapsed:.0f} s (target < 1800 s)")


def test_6_growth_claims(heavy_hex, report):
    ratios = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        q = sample_connected_subset(heavy_hex, 6, 62, rng)
        edges = len(heavy_hex.induced_edges(q.members))
        obs = PauliString.from_sites(127, {m: random_letters(rng, 1) for m in q.members})
        sk = build_ansatz(heavy_hex, q, 1, math.pi / 4)
        filled = generate_hard_circuit(sk, obs, 0, rng).circuit()
        sizes, _ = set_growth_trace(filled, obs)
        ratios.append(sizes[-1] / 1.5 ** (len(q) + edges))
    # every 6-qubit heavy-hex region is a tree, so |V| + |E| = 11 throughout
    predicted = 1.5 ** (6 + edges)
    mean_ratio = float(np.mean(ratios)) * predicted
    growth_ok = 0.5 <= float(np.mean(ratios)) <= 2.0

    capped = []
    full = QubitSubset(frozenset(range(127)), 62)
    z62 = PauliString.from_sites(127, {62: "Z"})
    for seed in range(3):
        sk = build_ansatz(heavy_hex, full, 3, math.pi / 4)
        hard = generate_hard_circuit(sk, z62, 1, np.random.default_rng(seed))
        capped.append(sim_spd.term_growth_profile(hard.circuit(), z62, 0.0, TERM_CAP).capped)
    report(6, "term growth", growth_ok and all(capped),
           f"random layer growth {mean_ratio:.1f} vs 1.5^{6 + edges} = {predicted:.1f} (factor-2 window); "
           f"127-qubit, 1 brute + 2 random layers exceeds 2^20 terms in {sum(capped)}/3 seeds")


def test_7_entropy(heavy_hex, report):
    rows = entropy_study(heavy_hex, [4, 6, 8, 10, 12], 5, 200, 3)
    by = {(r.family, r.N): r.mean for r in rows}
    ok = all(by["hard", n] >= by["kicked_ising", n] and max(by["hard", n], by["kicked_ising", n]) <= 2
             for n in (4, 6, 8, 10, 12))
    detail = ", ".join(f"N={n}: {by['hard', n]:.3f} vs {by['kicked_ising', n]:.3f}" for n in (4, 6, 8, 10, 12))
    report(7, "hard circuits entangle more than kicked-Ising (200 instances, L=5)", ok, detail)


def test_8_spd_truncation(heavy_hex, report):
    rng = np.random.default_rng(10)
    final, sweeps = [], []
    for k in range(5):
        q = sample_connected_subset(heavy_hex, 8, 62, rng)
        theta_J = -math.pi / 2 if k < 3 else float(rng.uniform(-math.pi, math.pi))
        c = build_kicked_ising(heavy_hex, q, 4, theta_J, float(rng.uniform(0, math.pi / 4)))
        exact = sim_dense.expectation_dense(c)
        errs = [abs(sim_spd.expectation_spd(c, threshold=10.0 ** -e) - exact) for e in range(1, 9)]
        final.append(errs[-1])
        sweeps.append(errs)
    mean_errs = np.mean(sweeps, axis=0)
    ok = max(final) < 1e-6 and mean_errs[-1] <= mean_errs[0]
    report(8, "SPD error vanishes as the threshold shrinks", ok,
           f"worst error at 1e-8: {max(final):.2e} (need < 1e-6); mean error by threshold "
           + " ".join(f"{e:.1e}" for e in mean_errs))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
