"""Entropic quantities (base-2 logarithms) and entropy continuity moduli."""

from __future__ import annotations

import numpy as np

from .channels import QuantumChannel, apply, complementary
from .errors import DomainError, ShapeMismatch
from .linalg import check_density, hermitian_part, partial_trace

EIG_CLAMP = 1e-15


def _entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w > EIG_CLAMP]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """``H(ρ) = −Tr ρ log₂ ρ`` with eigenvalues below 1e-15 treated as zero."""
    if validate:
        rho = check_density(rho)
    return _entropy_of_spectrum(np.linalg.eigvalsh(hermitian_part(np.asarray(rho))))


def binary_entropy(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0 or np.isnan(alpha):
        raise DomainError(f"binary entropy argument {alpha!r} outside [0, 1]")
    if alpha == 0.0 or alpha == 1.0:
        return 0.0
    return float(-alpha * np.log2(alpha) - (1 - alpha) * np.log2(1 - alpha))


def conditional_entropy(rho_ab, dims: tuple[int, int]) -> float:
    """``H(A|B) = H(AB) − H(B)`` for a state on ``A ⊗ B``."""
    rho_ab = np.asarray(rho_ab)
    return von_neumann_entropy(rho_ab, validate=False) - von_neumann_entropy(
        partial_trace(rho_ab, dims, 1), validate=False)


def coherent_information(rho, channel: QuantumChannel, complement: QuantumChannel | None = None) -> float:
    """``I_c(ρ, Φ) = H(Φ(ρ)) − H(Φᶜ(ρ))``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim_in, channel.dim_in):
        raise ShapeMismatch(f"state of shape {rho.shape} for a channel with input {channel.dim_in}")
    comp = complementary(channel) if complement is None else complement
    return (von_neumann_entropy(apply(channel, rho), validate=False)
            - von_neumann_entropy(apply(comp, rho), validate=False))


def _check_eps_dim(epsilon: float, dim: int) -> None:
    if not 0.0 <= epsilon <= 2.0 + 1e-12:
        raise DomainError(f"epsilon {epsilon!r} outside [0, 2]")
    if int(dim) < 1:
        raise DomainError(f"dimension {dim!r} must be positive")


def fannes_audenaert_term(epsilon: float, dim: int) -> float:
    """``(ε/2) log(d − 1) + h(ε/2)``, capped at ``log d``.

    The closed form peaks at ``ε/2 = 1 − 1/d`` where it equals ``log d``, the
    trivial ceiling on an entropy difference; beyond that point the cap keeps
    the term nondecreasing in ``ε``. For ``d = 1`` the term is zero.
    """
    _check_eps_dim(epsilon, dim)
    if dim == 1:
        return 0.0
    half = min(epsilon / 2.0, 1.0 - 1.0 / dim)
    head = half * np.log2(dim - 1) if dim > 1 else 0.0
    return float(head + binary_entropy(half))


def alicki_fannes_term(epsilon: float, dim: int) -> float:
    """``ε log d + (1 + ε/2) h(ε/(2 + ε))``."""
    _check_eps_dim(epsilon, dim)
    epsilon = min(epsilon, 2.0)
    return float(epsilon * np.log2(dim) + (1 + epsilon / 2) * binary_entropy(epsilon / (2 + epsilon)))
