import math

import numpy as np
import pytest

from appbench.circuit import (AnsatzSkeleton, Circuit, CircuitError, Layer, RotationGate,
                              build_ansatz, build_kicked_ising, is_clifford_angle)
from appbench.layout import QubitSubset, parse_layout, sample_connected_subset
from appbench.pauli import PauliString
from appbench.sim_dense import expectation_dense

PAIR = parse_layout("qubits 2\n0 1 1\n")


def test_two_qubit_ansatz_structure():
    sk = build_ansatz(PAIR, QubitSubset(frozenset({0, 1}), 0), 1, math.pi / 2)
    assert [layer.tag for layer in sk.layers] == ["single-qubit", "two-qubit-color-1"]
    assert [len(layer.gates) for layer in sk.layers] == [2, 1]
    assert sk.placeholder_count == 3
    assert all(g.is_placeholder for _, _, g in sk.placeholders())


def test_full_device_ansatz_counts(heavy_hex):
    q = QubitSubset(frozenset(range(127)), 62)
    sk = build_ansatz(heavy_hex, q, 20, math.pi / 2)
    two = sum(len(layer.gates) for layer in sk.layers if layer.tag.startswith("two"))
    assert two == 2880
    assert sk.placeholder_count == 20 * (144 + 127)


def test_placeholder_count_matches_induced_edges(heavy_hex):
    rng = np.random.default_rng(4)
    for _ in range(20):
        q = sample_connected_subset(heavy_hex, int(rng.integers(1, 20)), 62, rng)
        L = int(rng.integers(1, 5))
        sk = build_ansatz(heavy_hex, q, L, 0.1)
        induced = len(heavy_hex.induced_edges(q.members))
        assert sk.placeholder_count == L * (induced + len(q))


def test_application_order_within_step(heavy_hex):
    q = sample_connected_subset(heavy_hex, 20, 62, np.random.default_rng(0))
    sk = build_ansatz(heavy_hex, q, 2, 0.1)
    tags = [layer.tag for layer in sk.layers if layer.step == 1]
    assert tags[0] == "single-qubit"
    assert tags[1:] == sorted(tags[1:])


def test_kicked_ising_two_qubit_sequence():
    c = build_kicked_ising(PAIR, QubitSubset(frozenset({0, 1}), 0), 1, -0.4, 0.25)
    seq = [(g.qubits, g.letters, g.angle) for g in c.gates()]
    assert seq == [((0,), "X", 0.25), ((1,), "X", 0.25), ((0, 1), "ZZ", -0.4)]


def test_kicked_ising_without_field_is_trivial(heavy_hex):
    q = sample_connected_subset(heavy_hex, 8, 62, np.random.default_rng(1))
    c = build_kicked_ising(heavy_hex, q, 3, 0.77, 0.0)
    assert expectation_dense(c) == pytest.approx(1.0, abs=1e-12)


def test_ansatz_with_ising_letters_reproduces_kicked_ising(heavy_hex):
    q = sample_connected_subset(heavy_hex, 12, 62, np.random.default_rng(2))
    theta_J, theta_h = -math.pi / 2, math.pi / 4
    sk = build_ansatz(heavy_hex, q, 3, 0.0)
    letters = [["X" if len(g.qubits) == 1 else "ZZ" for g in layer.gates] for layer in sk.layers]
    angles = [[theta_h if len(g.qubits) == 1 else theta_J for g in layer.gates] for layer in sk.layers]
    obs = PauliString.from_sites(127, {62: "Z"})
    assert sk.fill(letters, obs, angles) == build_kicked_ising(heavy_hex, q, 3, theta_J, theta_h)


def test_json_roundtrip_is_bit_exact(heavy_hex):
    q = sample_connected_subset(heavy_hex, 10, 62, np.random.default_rng(3))
    c = build_kicked_ising(heavy_hex, q, 2, -0.1234567890123, math.pi / 7)
    again = Circuit.from_json(c.to_json())
    assert again == c
    assert [g.angle for g in again.gates()] == [g.angle for g in c.gates()]
    c.check_layout(heavy_hex)


def test_overlapping_supports_rejected():
    with pytest.raises(CircuitError):
        Layer("two-qubit-color-1", (RotationGate((0, 1), "ZZ", 0.1), RotationGate((1, 2), "ZZ", 0.1)))
    with pytest.raises(CircuitError):
        RotationGate((0, 0), "ZZ", 0.1)
    with pytest.raises(CircuitError):
        RotationGate((0, 1), "Z", 0.1)


def test_gate_outside_subset_rejected():
    layer = Layer("single-qubit", (RotationGate((3,), "X", 0.1),))
    with pytest.raises(CircuitError):
        Circuit(4, QubitSubset(frozenset({0, 1}), 0), (layer,), PauliString.from_sites(4, {0: "Z"}))


def test_check_layout_catches_wrong_color(heavy_hex):
    q = QubitSubset(frozenset({61, 62}), 62)
    layer = Layer("two-qubit-color-3", (RotationGate((61, 62), "ZZ", 0.1),))
    c = Circuit(127, q, (layer,), PauliString.from_sites(127, {62: "Z"}))
    assert heavy_hex.coloring[(61, 62)] == 1
    with pytest.raises(CircuitError):
        c.check_layout(heavy_hex)


def test_empty_subset_cannot_be_built():
    with pytest.raises(ValueError):
        QubitSubset(frozenset(), 0)


def test_clifford_detection():
    assert is_clifford_angle(math.pi / 2) and is_clifford_angle(-3 * math.pi / 2) and is_clifford_angle(0.0)
    assert not is_clifford_angle(math.pi / 4)
    sk = AnsatzSkeleton(2, QubitSubset(frozenset({0, 1}), 0), (), 0, math.pi / 2)
    assert sk.fill([], PauliString.from_label("ZI")).is_clifford()
