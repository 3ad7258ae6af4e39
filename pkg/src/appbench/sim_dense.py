"""Dense statevector simulation for small circuits.

Amplitude index convention: qubit ``k`` of the compact register is bit ``k``
of the index (little-endian).  A circuit on a device subset is compacted to
``0..N-1`` in ascending device order; :class:`Statevector` keeps the device
labels so callers can keep using device qubit numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, local_indexing
from .noise import NoiseModel, error_pauli, sample_trajectory_codes
from .pauli import PauliString

DEFAULT_CAP = 20
_I_POWERS = np.array([1, 1j, -1, -1j])


class CapacityError(RuntimeError):
    """Register is too large for dense simulation."""


class DensityMatrixError(ValueError):
    """Matrix is not a valid density matrix within tolerance."""


@dataclass
class Statevector:
    amplitudes: np.ndarray
    qubits: tuple[int, ...]

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def position(self, q: int) -> int:
        return self.qubits.index(q)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@lru_cache(maxsize=64)
def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def pauli_action(x: int, z: int, phase_exp: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(perm, factor)`` with ``(P psi)[c] = factor[c] * psi[perm[c]]``."""
    idx = _indices(n)
    perm = idx ^ x
    parity = np.bitwise_count(perm & z) & 1
    factor = _I_POWERS[(phase_exp + (x & z).bit_count()) % 4] * (1 - 2 * parity.astype(np.int8))
    return perm, factor.astype(np.complex128)


class _Kernel:
    """``psi -> c psi + i s P psi`` for a Pauli ``P`` on a batch of states.

    Diagonal Paulis reduce to one elementwise product.  Otherwise ``P`` flips
    the index bits in ``x``; the register is reshaped so that each flipped bit
    is its own axis of length two and the flip becomes a reversed view.
    """

    __slots__ = ("n", "diag", "shape", "flip", "fac", "c", "s")

    def __init__(self, x: int, z: int, phase_exp: int, n: int, c: float, s: complex):
        self.n, self.c, self.s = n, c, s
        _, factor = pauli_action(x, z, phase_exp, n)
        if x == 0:
            self.diag = c + (1j * s) * factor
            return
        self.diag = None
        shape, flip, cursor = [], [slice(None)], n
        for k in sorted((k for k in range(n) if x >> k & 1), reverse=True):
            shape += [1 << (cursor - k - 1), 2]
            flip += [slice(None), slice(None, None, -1)]
            cursor = k
        shape.append(1 << cursor)
        flip.append(slice(None))
        self.shape = tuple(shape)
        self.flip = tuple(flip)
        self.fac = ((1j * s) * factor).reshape(self.shape)

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        """Apply to ``psi`` of shape ``(B, 2**n)``; returns a new array."""
        if self.diag is not None:
            return psi * self.diag
        v = psi.reshape((psi.shape[0],) + self.shape)
        moved = self.fac * v[self.flip]
        if self.c != 0.0:
            moved += self.c * v
        return moved.reshape(psi.shape)


def _compact_bits(qubits, letters, index) -> tuple[int, int]:
    x = z = 0
    for q, ch in zip(qubits, letters):
        b = 1 << index[q]
        if ch in "XY":
            x |= b
        if ch in "YZ":
            z |= b
    return x, z


def _gate_ops(circuit: Circuit, cap: int):
    n = len(circuit.qubits)
    if n > cap:
        raise CapacityError(f"{n} qubits exceed the dense-simulation cap of {cap}")
    index = local_indexing(circuit)
    ops = []
    for g in circuit.gates():
        # exp(i theta P / 2) = cos(theta/2) + i sin(theta/2) P
        x, z = _compact_bits(g.qubits, g.letters, index)
        ops.append((g, _Kernel(x, z, 0, n, math.cos(g.angle / 2), math.sin(g.angle / 2))))
    return n, index, ops


def _compact_action(p: PauliString, index: dict[int, int], n: int):
    x = z = 0
    for q in p.support():
        b = 1 << index[q]
        x |= b * ((p.x_bits >> q) & 1)
        z |= b * ((p.z_bits >> q) & 1)
    return pauli_action(x, z, p.phase_exp, n)


def _expectations(psi: np.ndarray, obs_perm, obs_factor) -> np.ndarray:
    return np.real(np.sum(psi.conj() * (obs_factor * psi[:, obs_perm]), axis=1))


def simulate(circuit: Circuit, cap: int = DEFAULT_CAP) -> Statevector:
    n, _, ops = _gate_ops(circuit, cap)
    psi = np.zeros((1, 1 << n), dtype=np.complex128)
    psi[0, 0] = 1.0
    for _, kernel in ops:
        psi = kernel(psi)
    return Statevector(psi[0], tuple(circuit.qubits.sorted()))


def expectation_value(state: Statevector, obs: PauliString) -> float:
    index = {q: i for i, q in enumerate(state.qubits)}
    if not set(obs.support()) <= index.keys():
        raise ValueError("observable acts outside the simulated qubits")
    perm, factor = _compact_action(obs, index, state.num_qubits)
    return float(_expectations(state.amplitudes[None, :], perm, factor)[0])


def expectation_dense(circuit: Circuit, obs: PauliString | None = None, cap: int = DEFAULT_CAP) -> float:
    obs = circuit.observable if obs is None else obs
    return expectation_value(simulate(circuit, cap), obs)


def noisy_expectation_dense(circuit: Circuit, obs: PauliString | None, noise: NoiseModel,
                            trajectories: int, seed: int, cap: int = DEFAULT_CAP,
                            batch: int | None = None) -> tuple[float, float]:
    """Monte Carlo mean and standard error over Pauli-error trajectories.

    Errors are drawn after each two-qubit gate (and after single-qubit gates
    when ``noise.single_qubit_eps > 0``), trajectory ``t`` using the stream
    derived from ``(seed, t)``.

    Every trajectory coincides with the noiseless state until its first error,
    so one pass carries the noiseless state and gives a trajectory its own row
    only from its first error on.  Error-free trajectories take the noiseless
    value exactly.  ``batch`` bounds how many trajectories share one pass.
    """
    if trajectories < 1:
        raise ValueError("need at least one trajectory")
    obs = circuit.observable if obs is None else obs
    n, index, ops = _gate_ops(circuit, cap)
    dim = 1 << n
    if batch is None:
        batch = max(1, min(trajectories, (1 << 19) // dim))
    is_two = np.array([len(g.qubits) == 2 for g, _ in ops], dtype=bool)
    obs_perm, obs_factor = _compact_action(obs, index, n)
    err_cache: dict[tuple[int, int], _Kernel] = {}

    def error_kernel(k: int, code: int) -> _Kernel:
        key = (k, code)
        if key not in err_cache:
            e = error_pauli(code, ops[k][0].qubits, circuit.num_qubits)
            x, z = _compact_bits(e.support(), [e.letter(q) for q in e.support()], index)
            err_cache[key] = _Kernel(x, z, 0, n, 0.0, -1j)   # i * (-i) P = P
        return err_cache[key]

    values = np.empty(trajectories)
    for first in range(0, trajectories, batch):
        count = min(batch, trajectories - first)
        codes = sample_trajectory_codes(noise, is_two, seed, first, count)
        ideal = np.zeros((1, dim), dtype=np.complex128)
        ideal[0, 0] = 1.0
        rows = np.full(count, -1)            # row of each trajectory once it has erred
        active = np.empty((0, dim), dtype=np.complex128)
        for k, (_, kernel) in enumerate(ops):
            ideal = kernel(ideal)
            if active.shape[0]:
                active = kernel(active)
            col = codes[:, k]
            hit = np.nonzero(col)[0]
            if hit.size == 0:
                continue
            fresh = hit[rows[hit] < 0]
            if fresh.size:
                rows[fresh] = np.arange(active.shape[0], active.shape[0] + fresh.size)
                active = np.concatenate([active, np.repeat(ideal, fresh.size, axis=0)])
            for code in np.unique(col[hit]):
                r = rows[hit[col[hit] == code]]
                active[r] = error_kernel(k, int(code))(active[r])
        base = float(_expectations(ideal, obs_perm, obs_factor)[0])
        block = np.full(count, base)
        erred = rows >= 0
        if erred.any():
            block[erred] = _expectations(active, obs_perm, obs_factor)[rows[erred]]
        values[first:first + count] = block
    # offsetting by the noiseless value keeps error-free runs bit-exact
    dev = values - base
    mean = base + float(dev.mean())
    err = float(dev.std(ddof=1) / math.sqrt(trajectories)) if trajectories > 1 else 0.0
    return mean, err


def reduced_density_matrix(state: Statevector, pair: tuple[int, int]) -> np.ndarray:
    """4x4 marginal on ``pair`` (device labels); basis index ``2*b(pair[0]) + b(pair[1])``."""
    q1, q2 = pair
    if q1 == q2:
        raise ValueError("pair qubits must differ")
    if q1 not in state.qubits or q2 not in state.qubits:
        raise ValueError(f"pair {pair} is not in the register {state.qubits}")
    n = state.num_qubits
    a1, a2 = n - 1 - state.position(q1), n - 1 - state.position(q2)
    tensor = state.amplitudes.reshape((2,) * n)
    m = np.moveaxis(tensor, (a1, a2), (0, 1)).reshape(4, -1)
    return m @ m.conj().T


def entanglement_entropy(rho: np.ndarray, tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits; eigenvalues below 1e-12 count as zero."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DensityMatrixError("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise DensityMatrixError("trace is not 1")
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -tol:
        raise DensityMatrixError("matrix is not positive semidefinite")
    lam = lam[lam > 1e-12]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))
