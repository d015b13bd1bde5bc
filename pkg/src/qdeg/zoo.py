"""Channel families: Pauli channels, calibration channels, random mixed-unitary complements."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import QuantumChannel, channel_from_kraus, complementary, identity_channel
from .entropy import binary_entropy
from .errors import DomainError
from .linalg import random_unitary

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_unit(name: str, value: float, hi: float = 1.0) -> float:
    value = float(value)
    if not 0.0 <= value <= hi:
        raise DomainError(f"{name}={value!r} outside [0, {hi}]")
    return value


def pauli_channel(weights) -> QuantumChannel:
    """Qubit channel ``Σ w_k σ_k ρ σ_k`` with Paulis ordered I, X, Y, Z.

    Zero-weight terms are dropped so ``|E|`` equals the number of active Paulis.
    """
    ops = [np.sqrt(w) * s for w, s in zip(weights, (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)) if w > 0]
    return channel_from_kraus(ops, 2, 2)


def depolarizing(p: float) -> QuantumChannel:
    p = _check_unit("p", p)
    return pauli_channel([1 - p, p / 3, p / 3, p / 3])


def bb84(p_x: float, p_z: float) -> QuantumChannel:
    """Independent bit flip (prob. ``p_x``) and phase flip (prob. ``p_z``)."""
    p_x, p_z = _check_unit("p_x", p_x, 0.5), _check_unit("p_z", p_z, 0.5)
    # Y = iXZ carries the joint flip
    return pauli_channel([(1 - p_x) * (1 - p_z), p_x * (1 - p_z), p_x * p_z, p_z * (1 - p_x)])


def amplitude_damping(gamma: float) -> QuantumChannel:
    gamma = _check_unit("gamma", gamma)
    k0 = np.diag([1.0, np.sqrt(1 - gamma)]).astype(complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return channel_from_kraus([k0, k1] if gamma > 0 else [k0], 2, 2)


def erasure(p: float) -> QuantumChannel:
    """Qubit to qutrit: ``ρ ↦ (1−p) ρ ⊕ p Tr(ρ) |2⟩⟨2|``."""
    p = _check_unit("p", p)
    embed = np.zeros((3, 2), dtype=complex)
    embed[0, 0] = embed[1, 1] = 1.0
    ops = [np.sqrt(1 - p) * embed] if p < 1 else []
    for a in range(2):
        if p > 0:
            k = np.zeros((3, 2), dtype=complex)
            k[2, a] = np.sqrt(p)
            ops.append(k)
    return channel_from_kraus(ops, 2, 3)


def completely_depolarizing(dim: int = 2) -> QuantumChannel:
    """``ρ ↦ Tr(ρ) 1/d`` with the ``d²`` Kraus operators ``|i⟩⟨j|/√d``."""
    ops = np.zeros((dim * dim, dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            ops[i * dim + j, i, j] = 1 / np.sqrt(dim)
    return channel_from_kraus(ops, dim, dim)


def mixed_unitary(unitaries) -> QuantumChannel:
    """Uniform mixture ``(1/n) Σ U ρ U†``."""
    unitaries = np.asarray(unitaries, dtype=complex)
    return channel_from_kraus(unitaries / np.sqrt(len(unitaries)))


def sample_unitaries(dim: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.stack([random_unitary(dim, rng) for _ in range(count)])


def random_unitary_complement(dim_A: int, dim_B: int, seed: int) -> QuantumChannel:
    """Channel ``A → B`` whose complement is a mixture of ``dim_B`` Haar unitaries.

    The mixed-unitary map ``M`` on ``A`` (``|E| = |A|``) has Kraus operators
    ``U_i/√|B|``, so its own complement lands in a ``|B|``-dimensional space;
    that complement is the returned channel.
    """
    if dim_A < 2 or dim_B < 1:
        raise DomainError(f"need dim_A >= 2 and dim_B >= 1, got {(dim_A, dim_B)}")
    mix = mixed_unitary(sample_unitaries(dim_A, dim_B, seed))
    # complement of M: G_b[i, a] = U_b[i, a]/√|B| read as |B| × |A| blocks
    ops = mix.kraus.transpose(1, 0, 2)
    return channel_from_kraus(ops, dim_A, dim_B)


# closed forms

def depolarizing_q1(p: float) -> float:
    """``Q⁽¹⁾`` of the depolarizing channel.

    The maximally mixed input attains ``1 + (1−p) log(1−p) + p log(p/3)``
    while that is positive; past the hashing point a pure input (value 0)
    is optimal.
    """
    p = _check_unit("p", p)
    tail = p * np.log2(p / 3) if p > 0 else 0.0
    head = (1 - p) * np.log2(1 - p) if p < 1 else 0.0
    return max(0.0, float(1 + head + tail))


def bb84_q1(p_x: float, p_z: float) -> float:
    """``max(0, 1 − h(p_x) − h(p_z))``, the hashing value clamped at a pure input."""
    return max(0.0, 1 - binary_entropy(p_x) - binary_entropy(p_z))


@dataclass(frozen=True)
class ChannelFamilySpec:
    """A family tag and its parameters, e.g. ``("bb84", {"p_x": .01, "p_z": .01})``."""

    family: str
    params: dict = field(default_factory=dict)

    def build(self) -> QuantumChannel:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown channel family {self.family!r}")
        return FAMILIES[self.family](**self.params)


FAMILIES = {
    "depolarizing": depolarizing,
    "bb84": bb84,
    "amplitude_damping": amplitude_damping,
    "erasure": erasure,
    "random_unitary_complement": random_unitary_complement,
    "identity": identity_channel,
    "completely_depolarizing": completely_depolarizing,
}
