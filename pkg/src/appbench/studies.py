"""End-to-end experiments: fidelity records, validation of the fit, entropy study.

Every circuit gets its own seed drawn from ``(master_seed, family, index)``,
so any single record can be regenerated without replaying the whole sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import sim_clifford, sim_dense
from .analysis import FidelityRecord, FitResult, coverage, fit_quadratic
from .bench_gen import generate_benchmark_circuit
from .circuit import build_ansatz, build_kicked_ising
from .hard_gen import generate_hard_circuit
from .layout import DeviceLayout, lightcone_volume, sample_connected_subset
from .noise import NoiseModel
from .pauli import PauliString

_FAMILY_CODE = {"benchmark": 0, "kicked_ising": 1, "hard": 2, "entropy": 3}
DEFAULT_ANCHOR = 62


def circuit_seed(master_seed: int, family: str, index: int) -> int:
    ss = np.random.SeedSequence([master_seed, _FAMILY_CODE[family], index])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _anchor(layout: DeviceLayout, anchor: int | None) -> int:
    if anchor is not None:
        return anchor
    return DEFAULT_ANCHOR if layout.num_qubits > DEFAULT_ANCHOR else 0


def benchmark_records(layout: DeviceLayout, n_values: Iterable[int], l_values: Iterable[int],
                      per_cell: int, noise: NoiseModel, trajectories: int, master_seed: int,
                      anchor: int | None = None) -> list[FidelityRecord]:
    """Noisy stabilizer-engine records for benchmark circuits measuring ``Z`` on the anchor."""
    anchor = _anchor(layout, anchor)
    obs = PauliString.from_sites(layout.num_qubits, {anchor: "Z"})
    records = []
    index = 0
    for n in n_values:
        for L in l_values:
            for _ in range(per_cell):
                seed = circuit_seed(master_seed, "benchmark", index)
                rng = np.random.default_rng(seed)
                q = sample_connected_subset(layout, n, anchor, rng)
                c = generate_benchmark_circuit(build_ansatz(layout, q, L, math.pi / 2), obs, rng)
                ideal = sim_clifford.expectation(c)
                mean, _ = sim_clifford.noisy_expectation(c, obs, noise, trajectories, seed)
                records.append(FidelityRecord.make(f"bench-{index}", "benchmark", n, L,
                                                   lightcone_volume(c, obs), mean, ideal,
                                                   seed, trajectories))
                index += 1
    return records


def kicked_ising_records(layout: DeviceLayout, count: int, n_max: int, l_max: int,
                         noise: NoiseModel, trajectories: int, master_seed: int,
                         theta_J: float = -math.pi / 2, theta_h_max: float = math.pi / 4,
                         anchor: int | None = None, cap: int = sim_dense.DEFAULT_CAP
                         ) -> list[FidelityRecord]:
    """Noisy dense-engine records for kicked-Ising circuits with random N, L and theta_h."""
    anchor = _anchor(layout, anchor)
    obs = PauliString.from_sites(layout.num_qubits, {anchor: "Z"})
    records = []
    for index in range(count):
        seed = circuit_seed(master_seed, "kicked_ising", index)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, n_max + 1))
        L = int(rng.integers(1, l_max + 1))
        theta_h = float(rng.uniform(0.0, theta_h_max))
        q = sample_connected_subset(layout, n, anchor, rng)
        c = build_kicked_ising(layout, q, L, theta_J, theta_h, obs)
        ideal = sim_dense.expectation_dense(c, obs, cap)
        mean, _ = sim_dense.noisy_expectation_dense(c, obs, noise, trajectories, seed, cap)
        records.append(FidelityRecord.make(f"ki-{index}", "kicked_ising", n, L,
                                           lightcone_volume(c, obs), mean, ideal,
                                           seed, trajectories))
    return records


@dataclass
class ValidationResult:
    fit: FitResult
    benchmark: list[FidelityRecord]
    application: list[FidelityRecord]
    coverage: float


def validate(benchmark: Sequence[FidelityRecord],
             application: Sequence[FidelityRecord]) -> ValidationResult:
    """Fit the benchmark records and report how many application records fall in the band."""
    fit = fit_quadratic([r for r in benchmark if not r.flag])
    return ValidationResult(fit, list(benchmark), list(application), coverage(fit, application))


@dataclass
class EntropyRow:
    family: str
    N: int
    mean: float
    std: float
    instances: int


def entropy_study(layout: DeviceLayout, n_values: Iterable[int], num_layers: int, instances: int,
                  master_seed: int, brute_layers: int = 1, hard_theta: float = math.pi / 4,
                  theta_J: float = -math.pi / 2, theta_h: float = math.pi / 4,
                  cap: int = sim_dense.DEFAULT_CAP) -> list[EntropyRow]:
    """Mean two-qubit entanglement entropy of hard and kicked-Ising circuits per ``N``.

    Per instance: a random connected subset (anchored at a uniformly random
    qubit), a random measured pair inside it, a random weight-two observable
    on the pair.  Both families are simulated densely and the entropy of the
    pair's marginal is recorded.
    """
    rows = []
    index = 0
    for n in n_values:
        if n > cap:
            raise sim_dense.CapacityError(f"{n} qubits exceed the dense-simulation cap of {cap}")
        if n < 2:
            raise ValueError("the entropy study needs at least two qubits")
        hard_vals, ki_vals = [], []
        for _ in range(instances):
            rng = np.random.default_rng(circuit_seed(master_seed, "entropy", index))
            index += 1
            anchor = int(rng.integers(layout.num_qubits))
            q = sample_connected_subset(layout, n, anchor, rng)
            members = q.sorted()
            q1, q2 = (members[i] for i in rng.choice(len(members), size=2, replace=False))
            obs = PauliString.from_sites(layout.num_qubits,
                                         {q1: "XYZ"[int(rng.integers(3))], q2: "XYZ"[int(rng.integers(3))]})
            sk = build_ansatz(layout, q, num_layers, hard_theta)
            hard = generate_hard_circuit(sk, obs, min(brute_layers, num_layers), rng).circuit()
            ki = build_kicked_ising(layout, q, num_layers, theta_J, theta_h, obs)
            for circ, bucket in ((hard, hard_vals), (ki, ki_vals)):
                state = sim_dense.simulate(circ, cap)
                rho = sim_dense.reduced_density_matrix(state, (q1, q2))
                bucket.append(sim_dense.entanglement_entropy(rho))
        for family, vals in (("hard", hard_vals), ("kicked_ising", ki_vals)):
            a = np.asarray(vals)
            rows.append(EntropyRow(family, n, float(a.mean()),
                                   float(a.std(ddof=1)) if a.size > 1 else 0.0, a.size))
    return rows
