"""Sparse Pauli dynamics: Heisenberg evolution of an observable with truncation.

Gates are processed from last to first.  A gate ``G = exp(i a P / 2)`` maps
the observable to ``G^dag O G``, which is the rotation conjugation with angle
``-a``.  Terms with ``|coefficient| < threshold`` are dropped after every gate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .circuit import Circuit
from .pauli import PauliString, PauliSum, conjugate_by_rotation

DEFAULT_TERM_CAP = 1 << 20


def _truncate(s: PauliSum, threshold: float) -> PauliSum:
    if threshold > 0.0:
        s.terms = {k: c for k, c in s.terms.items() if abs(c) >= threshold}
    return s


def heisenberg_evolve(circuit: Circuit, obs: PauliString | None = None,
                      threshold: float = 0.0) -> PauliSum:
    obs = circuit.observable if obs is None else obs
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    n = circuit.num_qubits
    current = PauliSum.from_pauli(obs)
    for g in reversed(list(circuit.gates())):
        current = _truncate(conjugate_by_rotation(current, g.pauli(n), -g.angle), threshold)
    return current


def evaluate_on_zero_state(s: PauliSum) -> float:
    """``<0...0| s |0...0>``: only I/Z strings contribute (signs already in the coefficients)."""
    return sum(c for (x, _), c in s.terms.items() if x == 0)


def expectation_spd(circuit: Circuit, obs: PauliString | None = None, threshold: float = 0.0) -> float:
    return evaluate_on_zero_state(heisenberg_evolve(circuit, obs, threshold))


@dataclass
class GrowthProfile:
    gate_index: list[int]
    layer_tag: list[str]
    num_terms: list[int]
    capped: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gate_index", "layer_tag", "num_terms", "capped_flag"])
        last = len(self.num_terms) - 1
        for i, (g, tag, k) in enumerate(zip(self.gate_index, self.layer_tag, self.num_terms)):
            w.writerow([g, tag, k, int(self.capped and i == last)])
        return buf.getvalue()


def term_growth_profile(circuit: Circuit, obs: PauliString | None = None, threshold: float = 0.0,
                        term_cap: int = DEFAULT_TERM_CAP) -> GrowthProfile:
    """Number of terms after each processed gate (reverse order).

    ``gate_index`` is the gate's position in application order.  Evolution
    stops as soon as the count exceeds ``term_cap``; the profile is then
    marked ``capped``.
    """
    if term_cap < 1:
        raise ValueError("term_cap must be at least 1")
    obs = circuit.observable if obs is None else obs
    n = circuit.num_qubits
    tagged = [(layer.tag, g) for layer in circuit.layers for g in layer.gates]
    current = PauliSum.from_pauli(obs)
    prof = GrowthProfile([], [], [], False)
    for gi in range(len(tagged) - 1, -1, -1):
        tag, g = tagged[gi]
        current = _truncate(conjugate_by_rotation(current, g.pauli(n), -g.angle), threshold)
        prof.gate_index.append(gi)
        prof.layer_tag.append(tag)
        prof.num_terms.append(len(current))
        if len(current) > term_cap:
            prof.capped = True
            break
    return prof
