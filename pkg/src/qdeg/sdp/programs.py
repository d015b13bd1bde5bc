"""Channel programs: diamond-norm distance and approximate degradability.

Both programs share the Watrous-type epigraph

    minimize t  subject to  Z ⪰ D,  Z ⪰ 0,  t·1 − Tr_out Z ⪰ 0,

where ``D`` is a Choi-matrix difference. Its optimal value is half the
trace-norm diamond distance. :func:`diamond_norm_distance` returns the full
distance, while the degradability parameter ``ε`` reported by
:func:`epsilon_degradable` is the optimal ``t`` itself (the customary
normalization for ε-degradability); the report carries both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..channels import (
    ChoiMatrix,
    QuantumChannel,
    choi_matrix,
    complementary,
    compose,
    channel_from_choi,
    kraus_rank,
    transfer_matrix,
)
from ..errors import ShapeMismatch
from ..linalg import hermitian_part, partial_trace
from .problem import HermitianModel, block_from_hermitian
from .solver import SdpSolution, solve_sdp

ZERO_EPS = 1e-7
F_RANK_CUTOFF = 1e-9


def trace_out_first(d1: int, d2: int) -> sp.csr_matrix:
    """Sparse map ``vec(H) ↦ vec(Tr_1 H)`` for ``H`` on ``d1 ⊗ d2``."""
    e, x, y = np.meshgrid(np.arange(d1), np.arange(d2), np.arange(d2), indexing="ij")
    n = d1 * d2
    cols = (e * d2 + x) * n + e * d2 + y
    rows = x * d2 + y
    return sp.csr_matrix((np.ones(cols.size), (rows.ravel(), cols.ravel())), shape=(d2 * d2, n * n))


def composition_map(t_inner: np.ndarray, d_out: int, d_mid: int, d_in: int) -> sp.csr_matrix:
    """Sparse map ``vec J(Ξ) ↦ vec J(Ξ∘Φ)`` given the transfer matrix of Φ.

    ``J(Ξ)`` lives on ``out ⊗ mid`` and ``J(Ξ∘Φ)`` on ``out ⊗ in``; the map is
    ``J_out[(i,a),(j,b)] = Σ_{k,l} J(Ξ)[(i,k),(j,l)] T(Φ)[(k,l),(a,b)]``.
    """
    t4 = np.asarray(t_inner).reshape(d_mid, d_mid, d_in, d_in)
    i, j, k, l, a, b = np.meshgrid(*(np.arange(d) for d in (d_out, d_out, d_mid, d_mid, d_in, d_in)),
                                   indexing="ij", sparse=False)
    vals = t4[k, l, a, b]
    keep = np.abs(vals) > 0
    no, nm = d_out * d_in, d_out * d_mid
    rows = (i * d_in + a) * no + j * d_in + b
    cols = (i * d_mid + k) * nm + j * d_mid + l
    return sp.csr_matrix((vals[keep], (rows[keep], cols[keep])), shape=(no * no, nm * nm))


def _epigraph(model: HermitianModel, d_out: int, d_in: int):
    """Add ``Z, S ⪰ 0`` and ``t·1 − Tr_out Z ⪰ 0``; returns ``(t, Z, S)``."""
    t = model.nonneg()
    z = model.hermitian_psd(d_out * d_in)
    s = model.hermitian_psd(d_out * d_in)
    w = model.hermitian_psd(d_in)
    model.minimize(t)
    model.equal([(w, sp.eye(d_in * d_in)), (z, trace_out_first(d_out, d_in))],
                np.zeros((d_in, d_in)), scalars=[(t, -np.eye(d_in))])
    return t, z, s


def _diamond_half(a: QuantumChannel, b: QuantumChannel, tol: float, backend: str) -> tuple[float, SdpSolution]:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise ShapeMismatch("channels must have equal input and output dimensions")
    din, dout = a.dim_in, a.dim_out
    diff = choi_matrix(a) - choi_matrix(b)
    model = HermitianModel()
    t, z, s = _epigraph(model, dout, din)
    n2 = (dout * din) ** 2
    model.equal([(s, sp.eye(n2)), (z, -sp.eye(n2))], -diff)
    sol = solve_sdp(model.build(), tol=tol, backend=backend)
    return max(sol.objective, 0.0), sol


def diamond_norm_distance(a: QuantumChannel, b: QuantumChannel, tol: float = 1e-8,
                          backend: str = "ipm") -> float:
    """Trace-norm diamond distance ``‖a − b‖◇`` in ``[0, 2]``."""
    value, _ = _diamond_half(a, b, tol, backend)
    return min(2.0, 2.0 * value)


@dataclass
class DegradabilityReport:
    """Outcome of an ε-degradability (or anti-degradability) program.

    Attributes
    ----------
    epsilon : float
        Optimal value of the degradability program, ``min_Ξ ½‖Φᶜ − Ξ∘Φ‖◇``.
    diamond_distance : float
        ``2·epsilon``, the trace-norm diamond distance at the optimum.
    degrading_choi : ChoiMatrix
        Choi matrix of the optimal Ξ (maps ``B → E``).
    dim_E, dim_F : int
        Minimal environment dimension of the channel and Kraus rank of Ξ.
    verified_epsilon : float or None
        Half the diamond distance between Φᶜ and Ξ∘Φ, re-solved independently.
    """

    epsilon: float
    diamond_distance: float
    degrading_choi: ChoiMatrix
    dim_E: int
    dim_E_raw: int
    dim_F: int
    dim_B: int
    verified_epsilon: float | None
    solver: dict
    anti: bool = False
    x: np.ndarray | None = field(default=None, repr=False)

    @property
    def degrading_map(self) -> QuantumChannel:
        return channel_from_choi(self.degrading_choi, cutoff=F_RANK_CUTOFF)

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "diamond_distance": self.diamond_distance,
            "verified_epsilon": self.verified_epsilon,
            "anti": self.anti,
            "dim_E": self.dim_E,
            "dim_E_raw": self.dim_E_raw,
            "dim_F": self.dim_F,
            "dim_B": self.dim_B,
            "degrading_choi": [[[float(v.real), float(v.imag)] for v in row]
                               for row in self.degrading_choi.matrix],
            "solver": self.solver,
        }


def _repair_tp(j: np.ndarray, d_out: int, d_in: int) -> np.ndarray:
    """Congruence by ``1 ⊗ M^{-1/2}`` with ``M = Tr_out J`` so that ``Tr_out J = 1``."""
    j = hermitian_part(j)
    w, v = np.linalg.eigh(partial_trace(j, [d_out, d_in], 1))
    if w[0] <= 0:
        return j
    m = (v / np.sqrt(w)) @ v.conj().T
    fix = np.kron(np.eye(d_out), m.T)
    out = hermitian_part(fix @ j @ fix.conj().T)
    lo = np.linalg.eigvalsh(out)[0]
    if lo < 0:
        # clip spurious negative eigenvalues, then renormalize once more
        w2, v2 = np.linalg.eigh(out)
        out = (v2 * np.clip(w2, 0, None)) @ v2.conj().T
        return _repair_tp(out, d_out, d_in) if lo < -1e-12 else out
    return out


def epsilon_degradable(
    channel: QuantumChannel,
    tol: float = 1e-8,
    *,
    verify: bool = True,
    warm_start: DegradabilityReport | None = None,
    backend: str = "ipm",
    anti: bool = False,
) -> DegradabilityReport:
    """Smallest ε such that ``½‖Φᶜ − Ξ∘Φ‖◇ ≤ ε`` for some channel Ξ.

    The joint program is over ``Z`` and ``J(Ξ)``; the map ``J(Ξ) ↦ J(Ξ∘Φ)``
    is linear through ``T(Ξ∘Φ) = T(Ξ)T(Φ)``.
    """
    comp = complementary(channel)
    da, db, de = channel.dim_in, channel.dim_out, comp.dim_out
    jc = choi_matrix(comp)

    model = HermitianModel()
    t, z, s = _epigraph(model, de, da)
    jx = model.hermitian_psd(de * db)
    n2 = (de * da) ** 2
    lmap = composition_map(transfer_matrix(channel), de, db, da)
    model.equal([(s, sp.eye(n2)), (z, -sp.eye(n2)), (jx, -lmap)], -jc)
    model.equal([(jx, trace_out_first(de, db))], np.eye(db))
    problem = model.build()

    x0 = None
    if warm_start is not None and warm_start.x is not None and warm_start.x.shape == (problem.size,):
        x0 = warm_start.x
    sol = solve_sdp(problem, tol=tol, backend=backend, x0=x0)

    eps = max(sol.objective, 0.0)
    if eps < ZERO_EPS:
        eps = 0.0
    j_xi = _repair_tp(model.value(problem, sol.x, jx), de, db)
    xi_choi = ChoiMatrix(db, de, j_xi)
    xi = channel_from_choi(xi_choi, cutoff=F_RANK_CUTOFF)

    verified = None
    if verify:
        half, _ = _diamond_half(comp, compose(xi, channel), tol, backend)
        verified = 0.0 if half < ZERO_EPS else half

    return DegradabilityReport(
        epsilon=eps,
        diamond_distance=2.0 * eps,
        degrading_choi=xi_choi,
        dim_E=de,
        dim_E_raw=int(channel.kraus.shape[0]),
        dim_F=kraus_rank(xi, cutoff=F_RANK_CUTOFF),
        dim_B=db,
        verified_epsilon=verified,
        solver=sol.diagnostics(),
        anti=anti,
        x=sol.x,
    )


def epsilon_antidegradable(channel: QuantumChannel, tol: float = 1e-8, **kwargs) -> DegradabilityReport:
    """ε̄ computed as the degradability parameter of the complementary channel.

    In the returned report ``dim_B`` is the output dimension of ``channel``
    and ``dim_E`` the dimension of the channel that plays the degrading role's
    target (the output of the original channel).
    """
    report = epsilon_degradable(complementary(channel), tol, anti=True, **kwargs)
    report.dim_B = channel.dim_out
    return report
