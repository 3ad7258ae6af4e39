"""Stabilizer-tableau simulation of Clifford Pauli-rotation circuits.

Rotations are applied directly as conjugations of the tableau rows, never
decomposed into H/S/CX.  Rows ``0..n-1`` are destabilizers and ``n..2n-1``
stabilizers.  Letter codes per site are ``x + 2 z`` (I=0, X=1, Z=2, Y=3).
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, RotationGate, clifford_quarter_turns, is_clifford_angle, local_indexing
from .noise import NoiseModel, error_pauli, sample_trajectory_codes
from .pauli import PauliString, anticommutes_bits, product_phase

# power of i in sigma_a sigma_b for codes a, b
_PHASE = np.zeros((4, 4), dtype=np.int64)
_PHASE[1, 3] = _PHASE[3, 2] = _PHASE[2, 1] = 1
_PHASE[3, 1] = _PHASE[2, 3] = _PHASE[1, 2] = 3
_CODE = {"I": 0, "X": 1, "Z": 2, "Y": 3}


class EngineMismatchError(ValueError):
    """Circuit is not Clifford but the stabilizer engine was requested."""


class StabilizerTableau:
    """Destabilizer/stabilizer tableau, stored qubit-major: ``xt[q, row]``."""

    def __init__(self, n: int):
        self.n = n
        self.xt = np.zeros((n, 2 * n), dtype=np.uint8)
        self.zt = np.zeros((n, 2 * n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.int64)
        idx = np.arange(n)
        self.xt[idx, idx] = 1
        self.zt[idx, n + idx] = 1

    def copy(self) -> StabilizerTableau:
        out = StabilizerTableau.__new__(StabilizerTableau)
        out.n = self.n
        out.xt, out.zt, out.r = self.xt.copy(), self.zt.copy(), self.r.copy()
        return out

    def row(self, i: int) -> PauliString:
        x = sum(int(b) << q for q, b in enumerate(self.xt[:, i]))
        z = sum(int(b) << q for q, b in enumerate(self.zt[:, i]))
        return PauliString(self.n, x, z, 2 * int(self.r[i]))

    def stabilizers(self) -> list[PauliString]:
        return [self.row(self.n + i) for i in range(self.n)]

    def _anticommuting_rows(self, qubits, letters) -> np.ndarray:
        anti = np.zeros(2 * self.n, dtype=np.uint8)
        for q, c in zip(qubits, letters):
            px, pz = _CODE[c] & 1, _CODE[c] >> 1
            if pz:
                anti ^= self.xt[q]
            if px:
                anti ^= self.zt[q]
        return anti.astype(bool)

    def apply_rotation(self, qubits, letters: str, angle: float) -> StabilizerTableau:
        """Conjugate every row by ``exp(i angle P / 2)`` in place; returns ``self``."""
        if not is_clifford_angle(angle):
            raise EngineMismatchError(f"non-Clifford angle {angle!r}")
        t = clifford_quarter_turns(angle)
        if t == 0:
            return self
        anti = self._anticommuting_rows(qubits, letters)
        if not anti.any():
            return self
        if t == 2:
            self.r[anti] ^= 1
            return self
        rows = np.nonzero(anti)[0]
        k = np.full(rows.size, 1 if t == 1 else 3, dtype=np.int64) + 2 * self.r[rows]
        for q, c in zip(qubits, letters):
            a = _CODE[c]
            codes = self.xt[q, rows].astype(np.int64) + 2 * self.zt[q, rows]
            k += _PHASE[a, codes]
            if a & 1:
                self.xt[q, rows] ^= 1
            if a >> 1:
                self.zt[q, rows] ^= 1
        k %= 4
        if np.any(k & 1):
            raise AssertionError("conjugation produced a non-Hermitian row")
        self.r[rows] = k >> 1
        return self

    def expectation(self, obs: PauliString) -> int:
        """Expectation of a Hermitian Pauli string on the stabilizer state: -1, 0 or +1."""
        if obs.num_qubits != self.n:
            raise ValueError("observable width differs from tableau width")
        ox = np.array([(obs.x_bits >> q) & 1 for q in range(self.n)], dtype=np.uint8)
        oz = np.array([(obs.z_bits >> q) & 1 for q in range(self.n)], dtype=np.uint8)
        anti = ((self.xt & oz[:, None]) ^ (self.zt & ox[:, None])).sum(axis=0) & 1
        if anti[self.n:].any():
            return 0
        acc_x = np.zeros(self.n, dtype=np.int64)
        acc_z = np.zeros(self.n, dtype=np.int64)
        phase = 0
        for i in np.nonzero(anti[:self.n])[0]:
            row = self.n + i
            rx = self.xt[:, row].astype(np.int64)
            rz = self.zt[:, row].astype(np.int64)
            phase += 2 * int(self.r[row]) + int(_PHASE[acc_x + 2 * acc_z, rx + 2 * rz].sum())
            acc_x ^= rx
            acc_z ^= rz
        if not (np.array_equal(acc_x, ox) and np.array_equal(acc_z, oz)):
            raise AssertionError("observable not reproduced by stabilizer product")
        e = (obs.phase_exp - phase) % 4
        if e & 1:
            raise ValueError("observable is not Hermitian")
        return 1 if e == 0 else -1

    def check_invariants(self) -> None:
        """Raise if the rows break the canonical (anti)commutation pattern."""
        n = self.n
        x = self.xt.T.astype(np.int64)
        z = self.zt.T.astype(np.int64)
        sym = (x @ z.T + z @ x.T) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        expected[idx, n + idx] = expected[n + idx, idx] = 1
        if not np.array_equal(sym, expected):
            raise AssertionError("tableau commutation pattern violated")


def apply_rotation(tab: StabilizerTableau, gate: RotationGate) -> StabilizerTableau:
    """Apply a gate given in the tableau's own qubit indices."""
    return tab.apply_rotation(gate.qubits, gate.letters, gate.angle)


def _require_clifford(circuit: Circuit) -> None:
    for g in circuit.gates():
        if not is_clifford_angle(g.angle):
            raise EngineMismatchError(f"gate on {g.qubits} has non-Clifford angle {g.angle!r}")


def run_tableau(circuit: Circuit, debug: bool = False) -> tuple[StabilizerTableau, dict[int, int]]:
    _require_clifford(circuit)
    index = local_indexing(circuit)
    tab = StabilizerTableau(len(index))
    for g in circuit.gates():
        tab.apply_rotation([index[q] for q in g.qubits], g.letters, g.angle)
        if debug:
            tab.check_invariants()
    return tab, index


def _local_obs(obs: PauliString, index: dict[int, int]) -> PauliString:
    return PauliString.from_sites(len(index), {index[q]: c for q, c in obs.sites().items()},
                                  obs.phase_exp)


def expectation(circuit: Circuit, obs: PauliString | None = None, debug: bool = False) -> int:
    obs = circuit.observable if obs is None else obs
    tab, index = run_tableau(circuit, debug)
    return tab.expectation(_local_obs(obs, index))


def backpropagated_observables(circuit: Circuit, obs: PauliString) -> list[tuple[int, int, int]]:
    """Heisenberg image of ``obs`` just after each gate, as ``(x, z, phase_exp)``.

    Entry ``g`` is ``(G_m ... G_{g+1})^dag obs (G_m ... G_{g+1})``; at Clifford
    angles it is a single signed Pauli string.
    """
    _require_clifford(circuit)
    gates = list(circuit.gates())
    x, z, ph = obs.x_bits, obs.z_bits, obs.phase_exp
    out = [None] * len(gates)
    n = circuit.num_qubits
    for gi in range(len(gates) - 1, -1, -1):
        out[gi] = (x, z, ph)
        g = gates[gi]
        p = g.pauli(n)
        if not anticommutes_bits(p.x_bits, p.z_bits, x, z):
            continue
        # G^dag O G = exp(-i a P/2) O exp(i a P/2)
        t = (-clifford_quarter_turns(g.angle)) % 4
        if t == 2:
            ph = (ph + 2) % 4
        elif t in (1, 3):
            ph = (ph + t + product_phase(p.x_bits, p.z_bits, x, z)) % 4
            x ^= p.x_bits
            z ^= p.z_bits
    return out


def _flip_table(circuit: Circuit, obs: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Per gate, which error codes anticommute with the back-propagated observable."""
    gates = list(circuit.gates())
    images = backpropagated_observables(circuit, obs)
    n = circuit.num_qubits
    table = np.zeros((len(gates), 16), dtype=bool)
    is_two = np.array([len(g.qubits) == 2 for g in gates], dtype=bool)
    for gi, (g, (x, z, _)) in enumerate(zip(gates, images)):
        for code in range(1, 16 if is_two[gi] else 4):
            e = error_pauli(code, g.qubits, n)
            table[gi, code] = anticommutes_bits(e.x_bits, e.z_bits, x, z)
    return table, is_two


def noisy_expectation(circuit: Circuit, obs: PauliString | None, noise: NoiseModel,
                      trajectories: int, seed: int, method: str = "frame",
                      batch: int = 4096) -> tuple[float, float]:
    """Monte Carlo mean and standard error under sampled Pauli errors.

    ``method="frame"`` uses that a Pauli error ``E`` after gate ``g`` only
    flips the sign of the trajectory when it anticommutes with the observable
    back-propagated to that point.  ``method="tableau"`` inserts every sampled
    error into a fresh tableau as a pi rotation; both consume the same
    per-trajectory streams and give identical values.
    """
    if trajectories < 1:
        raise ValueError("need at least one trajectory")
    obs = circuit.observable if obs is None else obs
    gates = list(circuit.gates())
    ideal = expectation(circuit, obs)
    values = np.empty(trajectories)
    if method == "frame":
        table, is_two = _flip_table(circuit, obs)
        cols = np.arange(len(gates))
        for first in range(0, trajectories, batch):
            count = min(batch, trajectories - first)
            codes = sample_trajectory_codes(noise, is_two, seed, first, count)
            parity = table[cols, codes].sum(axis=1) & 1
            values[first:first + count] = ideal * (1 - 2 * parity)
    elif method == "tableau":
        is_two = np.array([len(g.qubits) == 2 for g in gates], dtype=bool)
        index = local_indexing(circuit)
        local = _local_obs(obs, index)
        for t in range(trajectories):
            codes = sample_trajectory_codes(noise, is_two, seed, t, 1)[0]
            tab = StabilizerTableau(len(index))
            for g, code in zip(gates, codes):
                qs = [index[q] for q in g.qubits]
                tab.apply_rotation(qs, g.letters, g.angle)
                if code:
                    e = error_pauli(int(code), tuple(qs), len(index))
                    tab.apply_rotation(e.support(), "".join(e.sites().values()), math.pi)
            values[t] = tab.expectation(local)
    else:
        raise ValueError(f"unknown method {method!r}")
    mean = float(values.mean())
    err = float(values.std(ddof=1) / math.sqrt(trajectories)) if trajectories > 1 else 0.0
    return mean, err
