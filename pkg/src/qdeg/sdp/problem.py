"""Standard-form conic problems and the Hermitian modeling layer.

The solver works on the real primal-dual pair::

    minimize    c·x              maximize    b·y
    subject to  A x = b          subject to  Aᵀy + s = c
                x ∈ K                        s ∈ K

where ``K`` is a nonnegative orthant times a product of real PSD cones. A
point ``x`` is stored as one flat vector: the orthant part first, then each
PSD block as a row-major ``n×n`` matrix.

:class:`HermitianModel` lets callers write constraints on complex Hermitian
matrix variables. Every Hermitian variable ``H`` of order ``n`` is realized
as a real symmetric block ``X`` of order ``2n`` through

    H = ½ (X₁₁ + X₂₂) + ½ i (X₂₁ − X₁₂),

which is PSD whenever ``X`` is, and ``X = [[Re H, −Im H], [Im H, Re H]]``
attains any PSD ``H``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.linalg import lapack

from ..errors import Infeasible, NumericalFailure, ShapeMismatch


@dataclass
class SdpProblem:
    """Real conic program in standard form.

    Attributes
    ----------
    n_lin : int
        Size of the nonnegative orthant.
    blocks : list of int
        Orders of the real symmetric PSD blocks.
    c : ndarray, shape (N,)
        Objective over the flat variable.
    a : scipy.sparse.csr_matrix, shape (m, N)
        Equality constraint matrix.
    b : ndarray, shape (m,)
    """

    n_lin: int
    blocks: list[int]
    c: np.ndarray
    a: sp.csr_matrix
    b: np.ndarray
    dropped_rows: int = 0

    @property
    def size(self) -> int:
        return self.n_lin + sum(n * n for n in self.blocks)

    @property
    def offsets(self) -> list[int]:
        """Start of each PSD block inside the flat variable."""
        out, pos = [], self.n_lin
        for n in self.blocks:
            out.append(pos)
            pos += n * n
        return out

    @property
    def barrier_degree(self) -> int:
        return self.n_lin + sum(self.blocks)

    def block(self, x: np.ndarray, k: int) -> np.ndarray:
        n = self.blocks[k]
        start = self.offsets[k]
        return x[start:start + n * n].reshape(n, n)

    def check(self) -> None:
        m, n = self.a.shape
        if n != self.size or self.c.shape != (n,) or self.b.shape != (m,):
            raise ShapeMismatch("inconsistent SDP dimensions")


def _transpose_permutation(problem: SdpProblem) -> np.ndarray:
    perm = np.arange(problem.size)
    for n, start in zip(problem.blocks, problem.offsets):
        idx = np.arange(n * n).reshape(n, n)
        perm[start:start + n * n] = start + idx.T.reshape(-1)
    return perm


def symmetrize(problem: SdpProblem) -> SdpProblem:
    """Replace every block coefficient matrix by its symmetric part."""
    perm = _transpose_permutation(problem)
    a = problem.a.tocsc()
    a_sym = 0.5 * (a + a[:, perm])
    c_sym = 0.5 * (problem.c + problem.c[perm])
    return SdpProblem(problem.n_lin, list(problem.blocks), c_sym, a_sym.tocsr(), problem.b.copy(),
                      problem.dropped_rows)


def presolve(problem: SdpProblem, rank_tol: float = 1e-10) -> SdpProblem:
    """Symmetrize coefficients and drop linearly dependent equality rows.

    Raises :class:`Infeasible` if a dropped row is inconsistent with ``b``.
    """
    problem.check()
    prob = symmetrize(problem)
    a = prob.a
    a.eliminate_zeros()
    keep_nonzero = np.diff(a.indptr) > 0
    if np.any(np.abs(prob.b[~keep_nonzero]) > 1e-12):
        raise Infeasible("an empty constraint row has a nonzero right-hand side")
    rows = np.flatnonzero(keep_nonzero)
    a = a[rows]
    b = prob.b[rows]
    gram = (a @ a.T).toarray()
    if gram.shape[0]:
        # pivoted Cholesky of the Gram matrix; pivots below tol mark dependent rows
        scale = max(float(np.max(np.diag(gram))), 1.0)
        _, piv, rank, info = lapack.dpstrf(gram, tol=rank_tol * scale, lower=1)
        if info < 0:
            raise NumericalFailure("rank detection failed")
        piv = piv - 1
    else:
        rank, piv = 0, np.arange(0)
    keep = np.sort(piv[:rank])
    drop = np.setdiff1d(np.arange(len(rows)), keep)
    if len(drop):
        g_kk = gram[np.ix_(keep, keep)]
        coef = sla.solve(g_kk, gram[np.ix_(keep, drop)], assume_a="pos").T
        if np.max(np.abs(coef @ b[keep] - b[drop])) > 1e-8 * (1 + np.max(np.abs(b))):
            raise Infeasible("dependent equality constraints are inconsistent")
    dropped = problem.a.shape[0] - len(keep)
    return SdpProblem(prob.n_lin, prob.blocks, prob.c, a[keep].tocsr(), b[keep], dropped)


def dump_triplets(problem: SdpProblem, path: str | os.PathLike) -> None:
    """Write the problem as plain-text sparse triplets.

    Header lines start with ``*``. Each data line is ``row block i j value``
    with 1-based indices; row 0 holds the objective, block 0 is the orthant
    (``i == j`` is the coordinate), blocks ``1..K`` are the PSD blocks, and
    only the upper triangle of each symmetric block is listed. The
    right-hand side follows as ``b row value`` lines.
    """
    lines = [
        f"* rows {problem.a.shape[0]}",
        f"* orthant {problem.n_lin}",
        "* blocks " + " ".join(str(n) for n in problem.blocks),
    ]

    def entries(row_index: int, vec: np.ndarray):
        nz = np.flatnonzero(vec)
        offs = problem.offsets
        for j in nz:
            if j < problem.n_lin:
                yield f"{row_index} 0 {j + 1} {j + 1} {vec[j]:.17g}"
                continue
            k = int(np.searchsorted(offs, j, side="right") - 1)
            n = problem.blocks[k]
            r, col = divmod(int(j - offs[k]), n)
            if r > col:
                continue
            val = vec[j] if r == col else vec[j] + vec[offs[k] + col * n + r]
            yield f"{row_index} {k + 1} {r + 1} {col + 1} {val:.17g}"

    lines.extend(entries(0, problem.c))
    a = problem.a.tocsr()
    for i in range(a.shape[0]):
        lines.extend(entries(i + 1, a[i].toarray().ravel()))
    lines.extend(f"b {i + 1} {v:.17g}" for i, v in enumerate(problem.b))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# --- Hermitian modeling layer -------------------------------------------


@dataclass(frozen=True)
class HermitianVar:
    index: int  # position in the model's block list
    dim: int


@dataclass(frozen=True)
class ScalarVar:
    index: int  # coordinate inside the orthant


def embedding_map(n: int) -> sp.csr_matrix:
    """Complex sparse map ``vec(X) ↦ vec(H)`` for a ``2n`` real block."""
    rows, cols, vals = [], [], []
    m = 2 * n
    for a in range(n):
        for b in range(n):
            r = a * n + b
            rows += [r, r, r, r]
            cols += [a * m + b, (n + a) * m + (n + b), (n + a) * m + b, a * m + (n + b)]
            vals += [0.5, 0.5, 0.5j, -0.5j]
    return sp.csr_matrix((vals, (rows, cols)), shape=(n * n, m * m), dtype=complex)


def hermitian_from_block(x: np.ndarray) -> np.ndarray:
    n = x.shape[0] // 2
    return 0.5 * (x[:n, :n] + x[n:, n:]) + 0.5j * (x[n:, :n] - x[:n, n:])


def block_from_hermitian(h: np.ndarray) -> np.ndarray:
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


@dataclass
class _Equation:
    terms: list  # (HermitianVar, complex sparse map on vec(H))
    scalars: list  # (ScalarVar, complex coefficient matrix)
    rhs: np.ndarray
    dim: int


@dataclass
class HermitianModel:
    """Builder for minimization problems over Hermitian PSD matrices and
    nonnegative scalars with Hermitian-valued linear equalities."""

    herm: list[HermitianVar] = field(default_factory=list)
    scalars: list[ScalarVar] = field(default_factory=list)
    equations: list[_Equation] = field(default_factory=list)
    objective: dict = field(default_factory=dict)

    def hermitian_psd(self, dim: int) -> HermitianVar:
        var = HermitianVar(len(self.herm), int(dim))
        self.herm.append(var)
        return var

    def nonneg(self) -> ScalarVar:
        var = ScalarVar(len(self.scalars))
        self.scalars.append(var)
        return var

    def minimize(self, var: ScalarVar, weight: float = 1.0) -> None:
        self.objective[var.index] = self.objective.get(var.index, 0.0) + weight

    def equal(self, terms: Sequence, rhs: np.ndarray, scalars: Sequence = ()) -> None:
        """Add ``Σ L_k(H_k) + Σ t_j C_j = rhs``.

        ``terms`` holds ``(var, L)`` pairs where ``L`` is a (sparse or dense)
        complex matrix acting on the row-major ``vec(H)``; ``scalars`` holds
        ``(scalar_var, C)`` pairs with Hermitian coefficient matrices ``C``.
        Every ``L`` must map Hermitian matrices to Hermitian matrices.
        """
        rhs = np.asarray(rhs, dtype=complex)
        q = rhs.shape[0]
        checked = []
        for var, lmap in terms:
            lmap = sp.csr_matrix(lmap, dtype=complex)
            if lmap.shape != (q * q, var.dim ** 2):
                raise ShapeMismatch(f"linear map shape {lmap.shape} incompatible with output {q}")
            checked.append((var, lmap))
        self.equations.append(_Equation(checked, list(scalars), rhs, q))

    def build(self) -> SdpProblem:
        n_lin = len(self.scalars)
        blocks = [2 * v.dim for v in self.herm]
        offsets, pos = [], n_lin
        for n in blocks:
            offsets.append(pos)
            pos += n * n
        total = pos
        emb = {v.index: embedding_map(v.dim) for v in self.herm}

        row_blocks, rhs = [], []
        for eq in self.equations:
            q = eq.dim
            iu, ju = np.triu_indices(q)
            flat = iu * q + ju
            off = iu != ju
            parts = []
            cmat = sp.lil_matrix((q * q, n_lin), dtype=complex)
            for var, coeff in eq.scalars:
                cmat[:, var.index] = np.asarray(coeff, dtype=complex).reshape(-1, 1)
            parts.append(cmat.tocsr())
            for var in self.herm:
                acc = sp.csr_matrix((q * q, blocks[var.index] ** 2), dtype=complex)
                for v, lmap in eq.terms:
                    if v.index == var.index:
                        acc = acc + lmap @ emb[var.index]
                parts.append(acc)
            full = sp.hstack(parts).tocsr()
            sel = full[flat]
            row_blocks.append(sp.csr_matrix(sel.real))
            row_blocks.append(sp.csr_matrix(sel[off].imag))
            rhs.append(eq.rhs.reshape(-1)[flat].real)
            rhs.append(eq.rhs.reshape(-1)[flat[off]].imag)
        a = sp.vstack(row_blocks).tocsr() if row_blocks else sp.csr_matrix((0, total))
        c = np.zeros(total)
        for idx, w in self.objective.items():
            c[idx] = w
        return SdpProblem(n_lin, blocks, c, a, np.concatenate(rhs) if rhs else np.zeros(0))

    def value(self, problem: SdpProblem, x: np.ndarray, var) -> np.ndarray | float:
        """Read a variable's value from a flat primal vector."""
        if isinstance(var, ScalarVar):
            return float(x[var.index])
        return hermitian_from_block(problem.block(x, var.index))
