"""Depolarizing Pauli noise shared by the stabilizer and dense engines.

Error codes: 0 means no error; ``1..15`` index the nontrivial two-qubit
Paulis as ``LETTERS[k // 4] + LETTERS[k % 4]`` (first letter on the gate's
first qubit).  Single-qubit codes ``1..3`` are X, Y, Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import LETTERS, PauliString

TWO_QUBIT_LABELS = tuple(LETTERS[k // 4] + LETTERS[k % 4] for k in range(16))


@dataclass(frozen=True)
class NoiseModel:
    two_qubit_eps: float = 0.0
    single_qubit_eps: float = 0.0

    def __post_init__(self):
        for name in ("two_qubit_eps", "single_qubit_eps"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def is_noiseless(self) -> bool:
        return self.two_qubit_eps == 0.0 and self.single_qubit_eps == 0.0

    @classmethod
    def from_config(cls, cfg: dict) -> NoiseModel:
        return cls(float(cfg.get("two_qubit_eps", 0.0)), float(cfg.get("single_qubit_eps", 0.0)))


def sample_codes(eps: float, num_paulis: int, rng: np.random.Generator, size) -> np.ndarray:
    """Error codes: 0 with probability ``1 - eps``, else uniform over ``1..num_paulis``."""
    hit = rng.random(size) < eps
    which = rng.integers(1, num_paulis + 1, size=size)
    return np.where(hit, which, 0)


def sample_two_qubit_error(model: NoiseModel, rng: np.random.Generator) -> PauliString | None:
    code = int(sample_codes(model.two_qubit_eps, 15, rng, None))
    if code == 0:
        return None
    return PauliString.from_label(TWO_QUBIT_LABELS[code])


def sample_single_qubit_error(model: NoiseModel, rng: np.random.Generator) -> PauliString | None:
    code = int(sample_codes(model.single_qubit_eps, 3, rng, None))
    if code == 0:
        return None
    return PauliString.from_label(LETTERS[code])


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one trajectory, derived from ``(seed, index)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_trajectory_codes(model: NoiseModel, is_two_qubit: np.ndarray, seed: int,
                            first: int, count: int) -> np.ndarray:
    """Codes for trajectories ``first..first+count-1``, shape ``(count, num_gates)``.

    Each row depends only on ``(seed, trajectory index)``, so any batching of
    trajectories gives the same samples.
    """
    is_two = np.asarray(is_two_qubit, dtype=bool)
    out = np.zeros((count, is_two.size), dtype=np.int8)
    n2, n1 = int(is_two.sum()), int((~is_two).sum())
    for row in range(count):
        rng = trajectory_rng(seed, first + row)
        two = sample_codes(model.two_qubit_eps, 15, rng, n2)
        one = sample_codes(model.single_qubit_eps, 3, rng, n1)
        out[row, is_two] = two
        out[row, ~is_two] = one
    return out


def error_pauli(code: int, qubits: tuple[int, ...], num_qubits: int) -> PauliString | None:
    if code == 0:
        return None
    label = TWO_QUBIT_LABELS[code] if len(qubits) == 2 else LETTERS[code]
    return PauliString.from_sites(num_qubits, dict(zip(qubits, label)))
