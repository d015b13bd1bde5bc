"""Quantum channel representations and conversions.

A :class:`QuantumChannel` is stored as a validated Kraus family. Every other
representation (Choi matrix, transfer matrix, Stinespring isometry) is derived
from it on demand.

Conventions
-----------
* Choi matrix ``J = Σ_ij Φ(E_ij) ⊗ E_ij`` with the output factor first, so
  ``J[(b, a), (b', a')] = Φ(|a⟩⟨a'|)[b, b']`` and ``Tr_B J = 1_A``.
* Transfer matrix ``T`` acts on row-major vectorizations,
  ``vec(Φ(ρ)) = T vec(ρ)``, and satisfies ``⟨ij|T|kl⟩ = ⟨ik|J|jl⟩``.
* Stinespring isometry ``V : A → B ⊗ E`` with the output factor first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CompletenessViolation,
    NotCompletelyPositive,
    NotTracePreserving,
    ShapeMismatch,
)
from .linalg import check_density, hermitian_part, partial_trace, permute_systems

COMPLETENESS_LIMIT = 1e-8
CHOI_TOL = 1e-10
RANK_CUTOFF = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators.

    Attributes
    ----------
    dim_in, dim_out : int
        Input dimension ``|A|`` and output dimension ``|B|``.
    kraus : ndarray, shape (k, dim_out, dim_in)
        Kraus operators ``F_x``. ``k`` is the environment dimension ``|E|``
        of the dilation built from this family.
    residual : float
        ``‖Σ F_x† F_x − 1‖_op`` measured at construction.
    """

    dim_in: int
    dim_out: int
    kraus: np.ndarray
    residual: float = field(default=0.0)

    @property
    def dim_env(self) -> int:
        return int(self.kraus.shape[0])

    def __repr__(self) -> str:
        return (
            f"QuantumChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, "
            f"kraus_count={self.dim_env}, residual={self.residual:.2e})"
        )

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(hermitian_part(self.matrix))[0])

    def tp_residual(self) -> float:
        marg = partial_trace(self.matrix, [self.dim_out, self.dim_in], keep=1)
        return float(np.linalg.norm(marg - np.eye(self.dim_in), 2))

    def validate(self, tol: float = CHOI_TOL) -> "ChoiMatrix":
        """Raise unless the matrix is the Choi matrix of a cptp map."""
        n = self.dim_in * self.dim_out
        if self.matrix.shape != (n, n):
            raise ShapeMismatch(f"Choi matrix shape {self.matrix.shape} != ({n}, {n})")
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > tol:
            raise NotCompletelyPositive("Choi matrix is not Hermitian")
        lam = self.min_eigenvalue()
        if lam < -tol:
            raise NotCompletelyPositive(f"Choi matrix has eigenvalue {lam:.3e}")
        res = self.tp_residual()
        if res > tol:
            raise NotTracePreserving(f"partial trace deviates from identity by {res:.3e}")
        return self


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    dim_in: int
    dim_out: int
    dim_env: int
    matrix: np.ndarray  # (dim_out * dim_env, dim_in), output factor first


def channel_from_kraus(kraus, dim_in: int | None = None, dim_out: int | None = None) -> QuantumChannel:
    """Build a channel from Kraus operators, checking completeness.

    Raises
    ------
    ShapeMismatch
        If the list is empty or the operators disagree on shape.
    CompletenessViolation
        If ``‖Σ F†F − 1‖_op > 1e-8``.
    """
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise ShapeMismatch("Kraus list is empty")
    shape = ops[0].shape
    if len(shape) != 2 or any(k.shape != shape for k in ops):
        raise ShapeMismatch("Kraus operators must be matrices of identical shape")
    if dim_out is not None and shape[0] != dim_out or dim_in is not None and shape[1] != dim_in:
        raise ShapeMismatch(f"Kraus shape {shape} does not match ({dim_out}, {dim_in})")
    stack = np.stack(ops)
    gram = np.einsum("xba,xbc->ac", stack.conj(), stack)
    residual = float(np.linalg.norm(gram - np.eye(shape[1]), 2))
    if residual > COMPLETENESS_LIMIT:
        raise CompletenessViolation(f"Σ F†F deviates from the identity by {residual:.3e}")
    return QuantumChannel(int(shape[1]), int(shape[0]), _frozen(stack), residual)


def identity_channel(dim: int = 2) -> QuantumChannel:
    return channel_from_kraus([np.eye(dim)])


def _kraus_vectors(channel: QuantumChannel) -> np.ndarray:
    # row-major vec(F) = Σ_a F|a⟩ ⊗ |a⟩, one row per Kraus operator
    return channel.kraus.reshape(channel.dim_env, -1)


def choi(channel: QuantumChannel) -> ChoiMatrix:
    v = _kraus_vectors(channel)
    j = v.T @ v.conj()
    return ChoiMatrix(channel.dim_in, channel.dim_out, hermitian_part(j))


def choi_matrix(channel: QuantumChannel) -> np.ndarray:
    """Choi matrix as a bare array."""
    return choi(channel).matrix


def kraus_rank(channel: QuantumChannel, cutoff: float = RANK_CUTOFF) -> int:
    w = np.linalg.eigvalsh(choi_matrix(channel))
    return int(np.sum(w > cutoff))


def channel_from_choi(
    j, dim_in: int | None = None, dim_out: int | None = None,
    cutoff: float = RANK_CUTOFF, tol: float = CHOI_TOL,
) -> QuantumChannel:
    """Canonical minimal-rank Kraus family from a Choi matrix.

    The Choi matrix is eigendecomposed; eigenvalues at or below ``cutoff``
    are discarded, so the returned Kraus count equals the numerical rank.
    """
    if not isinstance(j, ChoiMatrix):
        if dim_in is None or dim_out is None:
            raise ShapeMismatch("dimensions are required for a bare Choi array")
        j = ChoiMatrix(dim_in, dim_out, np.asarray(j, dtype=complex))
    j.validate(tol)
    w, v = np.linalg.eigh(hermitian_part(j.matrix))
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    keep = w > cutoff
    if not np.any(keep):
        raise NotTracePreserving("Choi matrix is numerically zero")
    ops = (v[:, keep] * np.sqrt(w[keep])).T.reshape(-1, j.dim_out, j.dim_in)
    # completeness is implied by validate(); discarded eigenvalues are tiny
    stack = np.stack(ops)
    gram = np.einsum("xba,xbc->ac", stack.conj(), stack)
    residual = float(np.linalg.norm(gram - np.eye(j.dim_in), 2))
    return QuantumChannel(j.dim_in, j.dim_out, _frozen(stack), residual)


def canonical(channel: QuantumChannel, cutoff: float = RANK_CUTOFF) -> QuantumChannel:
    """Minimal-rank Kraus form; returns ``channel`` itself if already minimal."""
    if kraus_rank(channel, cutoff) == channel.dim_env:
        return channel
    return channel_from_choi(choi(channel), cutoff=cutoff, tol=max(CHOI_TOL, 10 * channel.residual))


def apply(channel: QuantumChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim_in, channel.dim_in):
        raise ShapeMismatch(f"input has shape {rho.shape}, channel expects dimension {channel.dim_in}")
    k = channel.kraus
    return np.einsum("xba,ac,xdc->bd", k, rho, k.conj())


def apply_choi(j: ChoiMatrix, rho) -> np.ndarray:
    """Evaluate ``Tr_A[J (1 ⊗ ρ^T)]``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (j.dim_in, j.dim_in):
        raise ShapeMismatch(f"input has shape {rho.shape}, channel expects dimension {j.dim_in}")
    t = j.matrix.reshape(j.dim_out, j.dim_in, j.dim_out, j.dim_in)
    return np.einsum("badc,ac->bd", t, rho)


def apply_adjoint(channel: QuantumChannel, op) -> np.ndarray:
    """Heisenberg-picture map ``X ↦ Σ F† X F``."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (channel.dim_out, channel.dim_out):
        raise ShapeMismatch(f"operator shape {op.shape} does not match output dimension")
    k = channel.kraus
    return np.einsum("xba,bc,xcd->ad", k.conj(), op, k)


def apply_state(channel: QuantumChannel, rho) -> np.ndarray:
    """Like :func:`apply` but validates ``rho`` as a density operator first."""
    return apply(channel, check_density(rho, channel.dim_in))


def stinespring(channel: QuantumChannel) -> StinespringIsometry:
    """Isometry ``V = Σ_x F_x ⊗ |x⟩_E`` built from the stored Kraus family."""
    k = channel.kraus
    v = k.transpose(1, 0, 2).reshape(channel.dim_out * channel.dim_env, channel.dim_in)
    return StinespringIsometry(channel.dim_in, channel.dim_out, channel.dim_env, v)


def dilate(channel: QuantumChannel, rho) -> np.ndarray:
    """Joint output ``V ρ V†`` on ``B ⊗ E``."""
    v = stinespring(channel).matrix
    return v @ np.asarray(rho, dtype=complex) @ v.conj().T


def complementary(channel: QuantumChannel, cutoff: float = RANK_CUTOFF) -> QuantumChannel:
    """Complementary channel onto a minimal environment.

    If the stored Kraus family is already linearly independent its labels are
    used as the environment basis unchanged; otherwise the channel is first
    canonicalized through its Choi matrix.
    """
    base = canonical(channel, cutoff)
    g = base.kraus.transpose(1, 0, 2)  # G_b[x, a] = F_x[b, a]
    return QuantumChannel(base.dim_in, base.dim_env, _frozen(g), base.residual)


def transfer_from_choi(j: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    t = np.asarray(j).reshape(dim_out, dim_in, dim_out, dim_in).transpose(0, 2, 1, 3)
    return t.reshape(dim_out**2, dim_in**2)


def choi_from_transfer(t: np.ndarray, dim_in: int, dim_out: int) -> np.ndarray:
    j = np.asarray(t).reshape(dim_out, dim_out, dim_in, dim_in).transpose(0, 2, 1, 3)
    return j.reshape(dim_out * dim_in, dim_out * dim_in)


def transfer_matrix(channel: QuantumChannel) -> np.ndarray:
    """``T = Σ_x F_x ⊗ conj(F_x)``, shape ``(|B|², |A|²)``."""
    k = channel.kraus
    t = np.einsum("xij,xkl->ikjl", k, k.conj())
    return t.reshape(channel.dim_out**2, channel.dim_in**2)


def compose(outer: QuantumChannel, inner: QuantumChannel, canonicalize: bool = False) -> QuantumChannel:
    """``outer ∘ inner`` with Kraus family ``{G_y F_x}``."""
    if inner.dim_out != outer.dim_in:
        raise ShapeMismatch(f"cannot compose: inner outputs {inner.dim_out}, outer expects {outer.dim_in}")
    ops = np.einsum("ybc,xca->yxba", outer.kraus, inner.kraus)
    ops = ops.reshape(-1, outer.dim_out, inner.dim_in)
    out = channel_from_kraus(ops)
    return canonical(out) if canonicalize else out


def tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """``a ⊗ b`` with Kraus family ``{F_x ⊗ G_y}``."""
    ops = np.einsum("xij,ykl->xyikjl", a.kraus, b.kraus)
    ops = ops.reshape(a.dim_env * b.dim_env, a.dim_out * b.dim_out, a.dim_in * b.dim_in)
    return channel_from_kraus(ops)


def tensor_choi(ja: ChoiMatrix, jb: ChoiMatrix) -> ChoiMatrix:
    """Choi matrix of ``a ⊗ b`` from the factors' Choi matrices."""
    big = np.kron(ja.matrix, jb.matrix)  # ordering B1 A1 B2 A2
    dims = [ja.dim_out, ja.dim_in, jb.dim_out, jb.dim_in]
    return ChoiMatrix(
        ja.dim_in * jb.dim_in, ja.dim_out * jb.dim_out,
        permute_systems(big, dims, [0, 2, 1, 3]),
    )


def convex_combination(channels: Sequence[QuantumChannel], weights: Iterable[float]) -> QuantumChannel:
    """``Σ_i w_i Φ_i`` for probability weights ``w``."""
    weights = np.asarray(list(weights), dtype=float)
    if len(weights) != len(channels) or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise ShapeMismatch("weights must be a probability vector matching the channels")
    dims = {(c.dim_in, c.dim_out) for c in channels}
    if len(dims) != 1:
        raise ShapeMismatch("channels in a mixture must share dimensions")
    ops = [np.sqrt(w) * k for w, c in zip(weights, channels) if w > 0 for k in c.kraus]
    return channel_from_kraus(ops)


def channel_distance_choi(a: QuantumChannel, b: QuantumChannel) -> float:
    """Max-abs entrywise difference of two Choi matrices."""
    return float(np.max(np.abs(choi_matrix(a) - choi_matrix(b))))
