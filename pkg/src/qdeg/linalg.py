"""Dense complex linear algebra helpers: partial traces, subsystem permutations,
validation of Hermitian and density operators, random test objects.

All operators are plain ``numpy`` arrays. Multipartite operators use the
row-major computational basis, so the first factor in ``dims`` is the most
significant index.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeMismatch

HERMITIAN_TOL = 1e-12
DENSITY_TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``a`` as a complex array, raising if it is not Hermitian."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, tol):
        raise DomainError("operator is not Hermitian")
    return a


def check_density(rho, dim: int | None = None, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a density operator (Hermitian, PSD, unit trace)."""
    # Hermiticity is checked at the same tolerance as positivity: states are
    # often the output of a few matrix products.
    rho = check_hermitian(rho, tol=max(tol, HERMITIAN_TOL))
    if dim is not None and rho.shape[0] != dim:
        raise ShapeMismatch(f"state has dimension {rho.shape[0]}, expected {dim}")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise DomainError(f"state trace {np.trace(rho).real!r} differs from 1")
    if np.linalg.eigvalsh(hermitian_part(rho))[0] < -tol:
        raise DomainError("state has a negative eigenvalue")
    return rho


def _check_dims(n: int, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != n:
        raise ShapeMismatch(f"factor dimensions {dims} do not multiply to {n}")
    return dims


def partial_trace(op, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Parameters
    ----------
    op : (n, n) array
        Operator on the tensor product of factors with dimensions ``dims``.
    dims : sequence of int
        Factor dimensions; their product must equal ``n``.
    keep : int or iterable of int
        Indices of the factors to keep, in any order. The result keeps the
        original factor ordering.
    """
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {op.shape}")
    dims = _check_dims(op.shape[0], dims)
    keep = sorted({int(keep)} if np.isscalar(keep) else {int(k) for k in keep})
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ShapeMismatch(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = op.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # einsum with repeated labels on traced factors
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    rows = [letters[i] for i in range(n)]
    cols = [letters[i] if i in traced else letters[n + i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(out)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.einsum(spec, t).reshape(d_keep, d_keep)


def permute_systems(op, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a square operator.

    The ``k``-th factor of the result is factor ``perm[k]`` of ``op``.
    """
    op = np.asarray(op)
    dims = _check_dims(op.shape[0], dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(len(dims))):
        raise ShapeMismatch(f"{perm} is not a permutation of {len(dims)} factors")
    n = len(dims)
    t = op.reshape(dims + dims).transpose(perm + [n + p for p in perm])
    return t.reshape(op.shape)


def permutation_matrix(dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Unitary ``P`` with ``P (x_0 ⊗ ... ⊗ x_k) = x_perm[0] ⊗ ... ⊗ x_perm[k]``."""
    dims = [int(d) for d in dims]
    n = int(np.prod(dims))
    idx = np.arange(n).reshape(dims).transpose(list(perm)).reshape(-1)
    p = np.zeros((n, n))
    p[np.arange(n), idx] = 1.0
    return p


def trace_norm(a) -> float:
    a = np.asarray(a)
    if is_hermitian(a, 1e-9):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(a)))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(a))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def max_entangled(dim: int) -> np.ndarray:
    """Unnormalized maximally entangled vector ``Σ_i |i⟩|i⟩``."""
    return np.eye(dim, dtype=complex).reshape(-1)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase correction."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density operator from the induced (Ginibre) measure."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return hermitian_part(rho / np.trace(rho).real)


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())
