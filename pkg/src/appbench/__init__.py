"""Application-aware benchmarking of quantum circuits built from Pauli rotations."""

from .circuit import AnsatzSkeleton, Circuit, Layer, RotationGate, build_ansatz, build_kicked_ising
from .layout import DeviceLayout, QubitSubset, lightcone_volume, load_layout, sample_connected_subset
from .noise import NoiseModel
from .pauli import PauliString, PauliSum, commutes, conjugate_by_rotation, multiply

__version__ = "0.1.0"

__all__ = [
    "AnsatzSkeleton", "Circuit", "DeviceLayout", "Layer", "NoiseModel", "PauliString", "PauliSum",
    "QubitSubset", "RotationGate", "build_ansatz", "build_kicked_ising", "commutes",
    "conjugate_by_rotation", "lightcone_volume", "load_layout", "multiply", "sample_connected_subset",
]
