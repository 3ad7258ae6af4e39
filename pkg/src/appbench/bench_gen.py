"""Clifford benchmark circuits with unit expectation value.

Every placeholder of an ansatz at angle pi/2 is filled so that each qubit
stays in a single-qubit Pauli eigenstate.  The register tracks the exact
image of each eigenstate: under ``exp(i a L / 2)`` an eigenstate of ``A``
with eigenvalue ``s`` becomes an eigenstate of ``R A R^dag`` with the same
eigenvalue, which for an anticommuting ``L`` at ``a = +-pi/2`` lies on the
third axis.  A final alignment layer rotates each measured qubit into the
+1 eigenstate of its observable letter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import ALIGNMENT, AnsatzSkeleton, Layer, RotationGate
from .pauli import PauliSum, PauliString, conjugate_by_rotation

AXES = "XYZ"
Eigen = tuple[str, int]

HALF_PI = math.pi / 2


class GenerationError(ValueError):
    pass


def _one(letter: str) -> PauliString:
    return PauliString.from_label(letter)


@lru_cache(maxsize=None)
def propagate_eigenstate(state: Eigen, letter: str, effective_angle: float) -> Eigen:
    """Eigen-data of ``exp(i angle letter / 2)|state>``.

    Raises :class:`GenerationError` for non-Clifford angles.
    """
    axis, sign = state
    r = effective_angle / HALF_PI
    if abs(r - round(r)) * HALF_PI > 1e-12:
        raise GenerationError(f"effective angle {effective_angle!r} is not Clifford")
    image = conjugate_by_rotation(PauliSum.from_pauli(_one(axis)), _one(letter), effective_angle)
    ((x, z), c), = image.terms.items()
    new_axis = PauliString(1, x, z).to_label(with_sign=False)
    return new_axis, sign * (1 if c > 0 else -1)


def alignment_rotation(src: Eigen, dst: Eigen) -> RotationGate | None:
    """Single-qubit rotation mapping eigenstate ``src`` to ``dst``, or None if equal.

    The returned gate is on qubit 0; callers relocate it.
    """
    if src == dst:
        return None
    if src[0] == dst[0]:
        letter = min(c for c in AXES if c != src[0])
        return RotationGate((0,), letter, math.pi)
    third = next(c for c in AXES if c not in (src[0], dst[0]))
    for angle in (HALF_PI, -HALF_PI):
        if propagate_eigenstate(src, third, angle) == dst:
            return RotationGate((0,), third, angle)
    raise AssertionError("no alignment rotation found")


@dataclass
class EigenstateRegister:
    states: dict[int, Eigen]

    @classmethod
    def all_zero(cls, qubits) -> EigenstateRegister:
        return cls({q: ("Z", 1) for q in qubits})

    def product_state(self) -> dict[int, Eigen]:
        return dict(self.states)


def _alignment_targets(obs: PauliString) -> dict[int, Eigen]:
    sites = obs.sites()
    targets = {q: (c, 1) for q, c in sites.items()}
    if obs.sign < 0:
        if not sites:
            raise GenerationError("cannot reach <-I> = 1")
        first = min(sites)
        targets[first] = (sites[first], -1)
    return targets


def generate_benchmark_circuit(skeleton: AnsatzSkeleton, obs: PauliString,
                               rng: np.random.Generator,
                               return_register: bool = False):
    """Fill ``skeleton`` (global angle pi/2) so that ``<obs> = 1`` exactly."""
    if abs(skeleton.global_angle - HALF_PI) > 1e-12:
        raise GenerationError("benchmark skeleton must use global angle pi/2")
    if not obs.is_hermitian:
        raise GenerationError("observable must be Hermitian")
    if not skeleton.qubits.members.issuperset(obs.support()):
        raise GenerationError("observable acts outside the circuit's qubits")
    reg = EigenstateRegister.all_zero(skeleton.qubits.sorted())
    st = reg.states
    letters: list[list[str]] = []
    for layer in skeleton.layers:
        row = []
        for g in layer.gates:
            if len(g.qubits) == 1:
                (q,) = g.qubits
                c = AXES[int(rng.integers(3))]
                st[q] = propagate_eigenstate(st[q], c, HALF_PI)
                row.append(c)
            else:
                q1, q2 = g.qubits
                axis1, sign1 = st[q1]
                c2 = AXES[int(rng.integers(3))]
                st[q2] = propagate_eigenstate(st[q2], c2, sign1 * HALF_PI)
                row.append(axis1 + c2)
        letters.append(row)
    pre_alignment = reg.product_state()
    gates = []
    for q, target in sorted(_alignment_targets(obs).items()):
        g = alignment_rotation(st[q], target)
        if g is not None:
            gates.append(RotationGate((q,), g.letters, g.angle))
            st[q] = target
    extra = (Layer(ALIGNMENT, tuple(gates), skeleton.num_layers + 1),) if gates else ()
    circuit = skeleton.fill(letters, obs, extra_layers=extra)
    if return_register:
        return circuit, pre_alignment
    return circuit
