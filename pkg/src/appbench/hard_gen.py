"""Circuits whose Heisenberg-evolved observable spreads over many Pauli strings.

Placeholders are fixed from the last layer backwards.  In the brute-force
region each gate gets the Pauli that anticommutes with as many members of
the running set ``S`` as possible, and ``S`` absorbs the products ``P s`` of
the anticommuting members.  Earlier layers are filled uniformly at random.
Within a layer, gates are visited in reverse order.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .circuit import AnsatzSkeleton, Circuit
from .pauli import PauliString, anticommutes_bits

DEFAULT_MEMBER_CAP = 1 << 20

AXES = "XYZ"
ONE_QUBIT = tuple(AXES)
TWO_QUBIT = tuple(a + b for a, b in itertools.product(AXES, AXES))

# site code = x | z << 1  (I=0, X=1, Z=2, Y=3)
_SITE = {"I": 0, "X": 1, "Z": 2, "Y": 3}
_ANTI = [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0]]


def support(p: PauliString) -> set[int]:
    """Qubits on which ``p`` acts non-trivially."""
    return set(p.support())


class PauliSet:
    """Set of phase-free Pauli strings stored as ``(x_bits, z_bits)``."""

    def __init__(self, num_qubits: int, members=()):
        self.num_qubits = num_qubits
        self.members: set[tuple[int, int]] = set()
        self.support_mask = 0
        for m in members:
            self.add(m.key if isinstance(m, PauliString) else m)

    def add(self, key: tuple[int, int]) -> None:
        self.members.add(key)
        self.support_mask |= key[0] | key[1]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p) -> bool:
        return (p.key if isinstance(p, PauliString) else p) in self.members

    def restricted_histogram(self, qubits) -> np.ndarray:
        """Counts of members by their letters on ``qubits`` (base-4 site codes)."""
        hist = np.zeros(4 ** len(qubits), dtype=np.int64)
        if not any((self.support_mask >> q) & 1 for q in qubits):
            hist[0] = len(self.members)
            return hist
        counts: dict[int, int] = {}
        if len(qubits) == 1:
            (q,) = qubits
            for x, z in self.members:
                k = (x >> q & 1) | (z >> q & 1) << 1
                counts[k] = counts.get(k, 0) + 1
        else:
            q1, q2 = qubits
            for x, z in self.members:
                k = ((x >> q1 & 1) | (z >> q1 & 1) << 1) | ((x >> q2 & 1) | (z >> q2 & 1) << 1) << 2
                counts[k] = counts.get(k, 0) + 1
        for k, v in counts.items():
            hist[k] = v
        return hist

    def absorb(self, p: PauliString) -> int:
        """``S <- S | {P s : s in S, P s != s P}``; returns the number of new members."""
        px, pz = p.x_bits, p.z_bits
        new = [(x ^ px, z ^ pz) for x, z in self.members if ((px & z) ^ (pz & x)).bit_count() & 1]
        before = len(self.members)
        for key in new:
            self.add(key)
        return len(self.members) - before


def _candidate_codes(letters: str) -> list[int]:
    return [_SITE[c] for c in letters]


def _anticommuting_total(hist: np.ndarray, letters: str) -> int:
    codes = _candidate_codes(letters)
    total = 0
    for k in np.nonzero(hist)[0]:
        parity = 0
        for i, a in enumerate(codes):
            parity ^= _ANTI[a][(int(k) >> (2 * i)) & 3]
        if parity:
            total += int(hist[k])
    return total


def anticommute_count(p: PauliString, s: PauliSet) -> int:
    if p.num_qubits != s.num_qubits:
        raise ValueError("width mismatch")
    return sum(1 for x, z in s.members if anticommutes_bits(p.x_bits, p.z_bits, x, z))


@dataclass
class HardCircuit:
    skeleton: AnsatzSkeleton
    letters: list[list[str]]
    observable: PauliString
    trace: list[tuple[int, int, int | None, str]] = field(default_factory=list)
    switch_point: int | None = None
    cap_hit: bool = False
    final_set_size: int = 1

    def circuit(self, theta: float | None = None) -> Circuit:
        """The filled circuit at the skeleton's global angle, or at ``theta``."""
        sk = self.skeleton if theta is None else self.skeleton.with_angle(theta)
        return sk.fill(self.letters, self.observable)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gate_index", "layer", "set_size", "mode"])
        for row in self.trace:
            w.writerow(["" if v is None else v for v in row])
        return buf.getvalue()


def generate_hard_circuit(skeleton: AnsatzSkeleton, obs: PauliString, brute_layers: int,
                          rng: np.random.Generator,
                          member_cap: int = DEFAULT_MEMBER_CAP) -> HardCircuit:
    """Fill ``skeleton`` greedily over its last ``brute_layers`` steps, randomly before.

    If ``|S|`` exceeds ``member_cap`` during the brute-force region the
    generator switches to random filling at once.  ``switch_point`` is the
    application-order index of the first gate filled at random after
    brute-forcing (None if there is none).  Trace rows
    are ``(gate_index, step, |S| or None, mode)`` in processing order.
    """
    if member_cap < 1:
        raise ValueError("member_cap must be at least 1")
    if not 0 <= brute_layers <= skeleton.num_layers:
        raise ValueError(f"brute_layers must lie in 0..{skeleton.num_layers}")
    if not obs.is_hermitian:
        raise ValueError("observable must be Hermitian")
    if not skeleton.qubits.members.issuperset(obs.support()):
        raise ValueError("observable acts outside the skeleton's qubits")
    n = skeleton.num_qubits
    first_brute_step = skeleton.num_layers - brute_layers + 1
    S = PauliSet(n, [obs.unsigned()])
    letters = [[""] * len(layer.gates) for layer in skeleton.layers]
    offsets = np.cumsum([0] + [len(layer.gates) for layer in skeleton.layers])
    out = HardCircuit(skeleton, letters, obs)
    brute = brute_layers > 0
    for li in range(len(skeleton.layers) - 1, -1, -1):
        layer = skeleton.layers[li]
        for gi in range(len(layer.gates) - 1, -1, -1):
            g = layer.gates[gi]
            gate_index = int(offsets[li] + gi)
            pool = ONE_QUBIT if len(g.qubits) == 1 else TWO_QUBIT
            if brute and layer.step >= first_brute_step:
                hist = S.restricted_histogram(g.qubits)
                best, best_count = pool[0], -1
                for cand in pool:
                    k = _anticommuting_total(hist, cand)
                    if k > best_count:
                        best, best_count = cand, k
                letters[li][gi] = best
                if best_count:
                    S.absorb(PauliString.from_sites(n, dict(zip(g.qubits, best))))
                out.trace.append((gate_index, layer.step, len(S), "brute"))
                if len(S) > member_cap:
                    brute = False
                    out.cap_hit = True
                continue
            if out.switch_point is None and brute_layers > 0:
                out.switch_point = gate_index
            letters[li][gi] = pool[int(rng.integers(len(pool)))]
            out.trace.append((gate_index, layer.step, None, "random"))
    out.final_set_size = len(S)
    return out


def set_growth_trace(circuit: Circuit, obs: PauliString | None = None,
                     member_cap: int = DEFAULT_MEMBER_CAP) -> tuple[list[int], bool]:
    """``|S|`` after each gate (reverse order) of a filled circuit under the set update rule.

    Stops once ``|S|`` exceeds ``member_cap``; the flag reports that.
    """
    obs = circuit.observable if obs is None else obs
    S = PauliSet(circuit.num_qubits, [obs.unsigned()])
    sizes = []
    for g in reversed(list(circuit.gates())):
        S.absorb(g.pauli(circuit.num_qubits))
        sizes.append(len(S))
        if len(S) > member_cap:
            return sizes, True
    return sizes, False

