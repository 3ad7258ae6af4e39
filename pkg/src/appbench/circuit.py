"""Layered Pauli-rotation circuits.

A gate ``(P, theta)`` denotes ``exp(+i theta P / 2)``.  One Trotter step of
the layouts used here is applied as: a single-qubit layer over every qubit of
the subset, then the two-qubit layers of colors 1, 2, 3 restricted to edges
inside the subset.  Empty color layers are omitted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Sequence

from .layout import DeviceLayout, QubitSubset
from .pauli import PauliString

SINGLE = "single-qubit"
ALIGNMENT = "alignment"
COLOR_TAGS = {1: "two-qubit-color-1", 2: "two-qubit-color-2", 3: "two-qubit-color-3"}
LAYER_TAGS = (SINGLE, *COLOR_TAGS.values(), ALIGNMENT)

CLIFFORD_TOL = 1e-12


class CircuitError(ValueError):
    """Structural violation in a circuit or skeleton."""


def is_clifford_angle(theta: float, tol: float = CLIFFORD_TOL) -> bool:
    r = theta / (math.pi / 2)
    return abs(r - round(r)) * (math.pi / 2) < tol


def clifford_quarter_turns(theta: float) -> int:
    """``theta`` as a multiple of pi/2, reduced mod 4; raises for other angles."""
    if not is_clifford_angle(theta):
        raise CircuitError(f"angle {theta!r} is not a multiple of pi/2")
    return round(theta / (math.pi / 2)) % 4


@dataclass(frozen=True)
class RotationGate:
    qubits: tuple[int, ...]
    letters: str | None
    angle: float

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) not in (1, 2) or len(set(qubits)) != len(qubits):
            raise CircuitError(f"gate support must be 1 or 2 distinct qubits, got {qubits}")
        if self.letters is not None:
            if len(self.letters) != len(qubits) or any(c not in "XYZ" for c in self.letters):
                raise CircuitError(f"letters {self.letters!r} do not match support {qubits}")

    @property
    def is_placeholder(self) -> bool:
        return self.letters is None

    def pauli(self, num_qubits: int) -> PauliString:
        if self.letters is None:
            raise CircuitError("placeholder gate has no Pauli")
        return PauliString.from_sites(num_qubits, dict(zip(self.qubits, self.letters)))


@dataclass(frozen=True)
class Layer:
    tag: str
    gates: tuple[RotationGate, ...]
    step: int = 0

    def __post_init__(self):
        if self.tag not in LAYER_TAGS:
            raise CircuitError(f"unknown layer tag {self.tag!r}")
        object.__setattr__(self, "gates", tuple(self.gates))
        seen: set[int] = set()
        for g in self.gates:
            if seen.intersection(g.qubits):
                raise CircuitError(f"overlapping supports in {self.tag} layer at gate {g.qubits}")
            seen.update(g.qubits)
            if (self.tag in (SINGLE, ALIGNMENT)) != (len(g.qubits) == 1):
                raise CircuitError(f"{len(g.qubits)}-qubit gate in {self.tag} layer")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    qubits: QubitSubset
    layers: tuple[Layer, ...]
    observable: PauliString

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        members = self.qubits.members
        for layer in self.layers:
            for g in layer.gates:
                if g.letters is None:
                    raise CircuitError("circuit contains an unassigned placeholder")
                if not members.issuperset(g.qubits):
                    raise CircuitError(f"gate on {g.qubits} leaves the qubit subset")
        if self.observable.num_qubits != self.num_qubits:
            raise CircuitError("observable width differs from circuit width")
        if not members.issuperset(self.observable.support()):
            raise CircuitError("observable acts outside the qubit subset")

    def gates(self) -> Iterator[RotationGate]:
        for layer in self.layers:
            yield from layer.gates

    @property
    def num_gates(self) -> int:
        return sum(len(layer.gates) for layer in self.layers)

    def is_clifford(self) -> bool:
        return all(is_clifford_angle(g.angle) for g in self.gates())

    def with_observable(self, obs: PauliString) -> Circuit:
        return replace(self, observable=obs)

    def check_layout(self, layout: DeviceLayout) -> None:
        """Raise unless every two-qubit gate lies on a layout edge of its layer's color."""
        coloring = layout.coloring
        for layer in self.layers:
            for g in layer.gates:
                if len(g.qubits) != 2:
                    continue
                edge = (min(g.qubits), max(g.qubits))
                color = coloring.get(edge)
                if color is None or COLOR_TAGS[color] != layer.tag:
                    raise CircuitError(f"gate {g.qubits} is not a {layer.tag} edge of the layout")

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "qubits": self.qubits.sorted(),
            "anchor": self.qubits.anchor,
            "observable": self.observable.to_label(),
            "layers": [
                {"tag": layer.tag, "step": layer.step,
                 "gates": [{"qubits": list(g.qubits), "letters": g.letters, "angle": g.angle}
                           for g in layer.gates]}
                for layer in self.layers
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> Circuit:
        obs_label = data["observable"]
        n = data.get("num_qubits")
        obs = PauliString.from_label(obs_label, n)
        n = obs.num_qubits
        subset = QubitSubset(frozenset(data["qubits"]), data["anchor"])
        layers = tuple(
            Layer(d["tag"],
                  tuple(RotationGate(tuple(g["qubits"]), g["letters"], float(g["angle"]))
                        for g in d["gates"]),
                  d.get("step", 0))
            for d in data["layers"])
        return cls(n, subset, layers, obs)

    @classmethod
    def from_json(cls, text: str) -> Circuit:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AnsatzSkeleton:
    """Circuit structure whose gate letters are still open; all gates share ``global_angle``."""

    num_qubits: int
    qubits: QubitSubset
    layers: tuple[Layer, ...]
    num_layers: int
    global_angle: float

    def placeholders(self) -> Iterator[tuple[int, int, RotationGate]]:
        for li, layer in enumerate(self.layers):
            for gi, g in enumerate(layer.gates):
                yield li, gi, g

    @property
    def placeholder_count(self) -> int:
        return sum(len(layer.gates) for layer in self.layers)

    def fill(self, letters: Sequence[Sequence[str]], observable: PauliString,
             angles: Sequence[Sequence[float]] | None = None,
             extra_layers: Sequence[Layer] = ()) -> Circuit:
        """Instantiate with ``letters[layer][gate]`` (and optional per-gate angles)."""
        if len(letters) != len(self.layers):
            raise CircuitError("letter assignment does not match the layer count")
        layers = []
        for li, layer in enumerate(self.layers):
            if len(letters[li]) != len(layer.gates):
                raise CircuitError(f"layer {li}: wrong number of letters")
            gates = tuple(
                RotationGate(g.qubits, letters[li][gi],
                             self.global_angle if angles is None else angles[li][gi])
                for gi, g in enumerate(layer.gates))
            layers.append(Layer(layer.tag, gates, layer.step))
        return Circuit(self.num_qubits, self.qubits, tuple(layers) + tuple(extra_layers), observable)

    def with_angle(self, theta: float) -> AnsatzSkeleton:
        return replace(self, global_angle=theta)


def _step_layers(layout: DeviceLayout, q: QubitSubset, step: int,
                 single: Callable[[int], RotationGate],
                 double: Callable[[tuple[int, int]], RotationGate]) -> list[Layer]:
    members = q.members
    layers = [Layer(SINGLE, tuple(single(v) for v in sorted(members)), step)]
    for color in (1, 2, 3):
        edges = layout.edges_of_color(color, members)
        if edges:
            layers.append(Layer(COLOR_TAGS[color], tuple(double(e) for e in edges), step))
    return layers


def build_ansatz(layout: DeviceLayout, q: QubitSubset, num_layers: int,
                 global_angle: float) -> AnsatzSkeleton:
    if not q.members:
        raise ValueError("qubit subset is empty")
    if num_layers < 0:
        raise ValueError("num_layers must be non-negative")
    layers: list[Layer] = []
    for step in range(1, num_layers + 1):
        layers += _step_layers(layout, q, step,
                               lambda v: RotationGate((v,), None, global_angle),
                               lambda e: RotationGate(e, None, global_angle))
    return AnsatzSkeleton(layout.num_qubits, q, tuple(layers), num_layers, global_angle)


def build_kicked_ising(layout: DeviceLayout, q: QubitSubset, num_layers: int,
                       theta_J: float, theta_h: float,
                       observable: PauliString | None = None) -> Circuit:
    """Trotterized kicked-Ising circuit: X(theta_h) on every qubit, then ZZ(theta_J) per color.

    With the ``exp(+i theta P / 2)`` convention, ``theta_h = 2 h t / n`` and
    ``theta_J = -2 J t / n``.
    """
    if not q.members:
        raise ValueError("qubit subset is empty")
    if observable is None:
        observable = PauliString.from_sites(layout.num_qubits, {q.anchor: "Z"})
    layers: list[Layer] = []
    for step in range(1, num_layers + 1):
        layers += _step_layers(layout, q, step,
                               lambda v: RotationGate((v,), "X", theta_h),
                               lambda e: RotationGate(e, "ZZ", theta_J))
    return Circuit(layout.num_qubits, q, tuple(layers), observable)


def local_indexing(circuit: Circuit) -> dict[int, int]:
    """Device qubit -> compact index 0..N-1 in ascending device order."""
    return {q: i for i, q in enumerate(circuit.qubits.sorted())}


def compact_pauli(p: PauliString, index: dict[int, int]) -> PauliString:
    return PauliString.from_sites(len(index), {index[q]: c for q, c in p.sites().items()},
                                  p.phase_exp)
