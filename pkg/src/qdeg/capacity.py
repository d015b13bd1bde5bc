"""Coherent-information optimizers and capacity upper bounds.

Bounds take a degradability report (ε, |E|, |F|) together with precomputed
``Q⁽¹⁾`` and ``U_Ξ`` values and add the entropy continuity corrections.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .channels import QuantumChannel, apply, apply_adjoint, complementary, compose
from .entropy import alicki_fannes_term, binary_entropy, fannes_audenaert_term
from .errors import DimensionMetadataMissing, DomainError, ShapeMismatch
from .linalg import hermitian_part, random_density

log = logging.getLogger(__name__)

_LOG_FLOOR = 1e-300


def _entropy_and_log(sigma: np.ndarray):
    w, v = np.linalg.eigh(hermitian_part(sigma))
    w = np.clip(w, 0.0, None)
    pos = w[w > 1e-15]
    h = float(-np.sum(pos * np.log2(pos)))
    logm = (v * np.log2(np.maximum(w, _LOG_FLOOR))) @ v.conj().T
    return h, logm


class EntropyDifference:
    """``f(ρ) = H(P(ρ)) − H(N(ρ))`` for channels ``P`` and ``N`` on one input.

    Both channels are trace preserving, so the Euclidean gradient over
    Hermitian matrices is ``N†(log N(ρ)) − P†(log P(ρ))`` (base 2).
    """

    def __init__(self, pos: QuantumChannel, neg: QuantumChannel):
        if pos.dim_in != neg.dim_in:
            raise ShapeMismatch("both channels must share the input space")
        self.pos, self.neg, self.dim = pos, neg, pos.dim_in

    def value(self, rho: np.ndarray) -> float:
        return _entropy_and_log(apply(self.pos, rho))[0] - _entropy_and_log(apply(self.neg, rho))[0]

    def value_and_grad(self, rho: np.ndarray):
        hp, lp = _entropy_and_log(apply(self.pos, rho))
        hn, ln = _entropy_and_log(apply(self.neg, rho))
        grad = apply_adjoint(self.neg, ln) - apply_adjoint(self.pos, lp)
        return hp - hn, hermitian_part(grad)

    # square-root parameterization ρ = AA†/Tr(AA†) over real coordinates

    def _unpack(self, z: np.ndarray) -> np.ndarray:
        d = self.dim
        return z[: d * d].reshape(d, d) + 1j * z[d * d:].reshape(d, d)

    def _objective(self, z: np.ndarray):
        a = self._unpack(z)
        g = a @ a.conj().T
        tr = np.trace(g).real
        rho = g / tr
        f, grad = self.value_and_grad(rho)
        # d f / d A* for f(AA†/Tr) is (G − Tr(Gρ)) A / Tr
        ga = (grad - np.trace(grad @ rho).real * np.eye(self.dim)) @ a / tr
        dz = 2.0 * np.concatenate([ga.real.ravel(), ga.imag.ravel()])
        return -f, -dz

    def maximize(self, starts, gtol: float = 1e-7, ftol: float = 1e-12, max_iter: int = 500):
        """Run L-BFGS from each start; return ``(best value, argmax, runs)``."""
        best_val, best_rho, runs = -np.inf, None, []
        for rho0 in starts:
            w, v = np.linalg.eigh(hermitian_part(rho0))
            a0 = v * np.sqrt(np.clip(w, 1e-12, None))
            z0 = np.concatenate([a0.real.ravel(), a0.imag.ravel()])
            res = minimize(self._objective, z0, jac=True, method="L-BFGS-B",
                           options={"gtol": gtol, "ftol": ftol, "maxiter": max_iter})
            a = self._unpack(res.x)
            rho = hermitian_part(a @ a.conj().T)
            rho /= np.trace(rho).real
            val = self.value(rho)
            runs.append({"value": val, "iterations": int(res.nit), "converged": bool(res.success)})
            if val > best_val:
                best_val, best_rho = val, rho
        return best_val, best_rho, runs


def channel_coherent_information(
    channel: QuantumChannel,
    starts: int = 20,
    seed: int = 0,
    return_diagnostics: bool = False,
):
    """``Q⁽¹⁾ = max_ρ I_c(ρ, Φ)`` by multi-start ascent.

    The maximally mixed state is always the first start; ``starts`` more are
    drawn from the induced measure with the given seed.

    Returns
    -------
    value : float
    rho : ndarray
        The best input found.
    """
    d = channel.dim_in
    rng = np.random.default_rng(seed)
    inits = [np.eye(d) / d] + [random_density(d, rng) for _ in range(starts)]
    problem = EntropyDifference(channel, complementary(channel))
    val, rho, runs = problem.maximize(inits)
    if return_diagnostics:
        return val, rho, runs
    return val, rho


def u_xi(channel: QuantumChannel, degrading: QuantumChannel, gtol: float = 1e-7) -> float:
    """``U_Ξ(Φ) = max_ρ H(F|Ẽ)``, i.e. ``max_ρ H(Φ(ρ)) − H(Ξ∘Φ(ρ))``.

    The objective is concave, so one start at the maximally mixed state is
    used.
    """
    if degrading.dim_in != channel.dim_out:
        raise ShapeMismatch(f"degrading map input {degrading.dim_in} != channel output {channel.dim_out}")
    d = channel.dim_in
    val, _, _ = EntropyDifference(channel, compose(degrading, channel)).maximize([np.eye(d) / d], gtol=gtol)
    return val


@dataclass(frozen=True)
class BoundTerms:
    epsilon: float
    dim_E: int
    dim_F: int
    fa: float
    af: float
    af_F: float
    xi: float
    xi1: float
    xi2: float

    @classmethod
    def evaluate(cls, epsilon: float, dim_E: int, dim_F: int) -> "BoundTerms":
        fa = fannes_audenaert_term(epsilon, dim_E)
        af = alicki_fannes_term(epsilon, dim_E)
        return cls(epsilon, dim_E, dim_F, fa, af, alicki_fannes_term(epsilon, dim_F),
                   fa + af, 2 * af, fa + af)


@dataclass(frozen=True)
class CapacityBounds:
    q1: float
    u_xi: float
    q_upper_thm1_i: float
    q_upper_thm1_ii: float
    p_upper_thm1_iii: float
    p_upper_thm1_iv: float
    p1_upper_thm1_v: float
    qss_upper: float
    pss_upper: float
    anti_upper: float | None
    terms: BoundTerms

    def upper_bounds(self) -> dict[str, float]:
        keys = ["q_upper_thm1_i", "q_upper_thm1_ii", "p_upper_thm1_iii", "p_upper_thm1_iv",
                "p1_upper_thm1_v", "qss_upper", "pss_upper"]
        out = {k: getattr(self, k) for k in keys}
        if self.anti_upper is not None:
            out["anti_upper"] = self.anti_upper
        return out

    def to_dict(self) -> dict:
        return asdict(self)


def capacity_bounds(channel: QuantumChannel, report, q1: float, uxi: float,
                    anti_report=None) -> CapacityBounds:
    """Evaluate every ε-degradability bound from a solved report.

    ``report`` needs ``epsilon``, ``dim_E`` and ``dim_F``; an optional
    anti-degradability report adds ``anti_upper``.
    """
    dim_e, dim_f = getattr(report, "dim_E", None), getattr(report, "dim_F", None)
    if dim_e is None or dim_f is None:
        raise DimensionMetadataMissing("report lacks |E| or |F|")
    eps = float(report.epsilon)
    terms = BoundTerms.evaluate(eps, dim_e, dim_f)
    h_tail = (1 + eps / 2) * binary_entropy(min(eps, 2.0) / (2 + eps))
    p_iv = uxi + eps * (2 * np.log2(dim_e) + 0.5 * np.log2(dim_f)) + 2.5 * h_tail
    anti = None
    if anti_report is not None:
        anti = anti_degradable_bound(anti_report, channel.dim_out)
    return CapacityBounds(
        q1=q1,
        u_xi=uxi,
        q_upper_thm1_i=q1 + terms.xi,
        q_upper_thm1_ii=uxi + terms.af,
        p_upper_thm1_iii=q1 + terms.fa + 3 * terms.af,
        p_upper_thm1_iv=p_iv,
        p1_upper_thm1_v=q1 + terms.xi,
        qss_upper=uxi + terms.af,
        pss_upper=p_iv,
        anti_upper=anti,
        terms=terms,
    )


def anti_degradable_bound(report, dim_B: int) -> float:
    """Upper bound on quantum and private capacity from ε̄-anti-degradability."""
    if not getattr(report, "anti", True):
        raise DomainError("report is not an anti-degradability report")
    eps = float(getattr(report, "epsilon", report))
    return fannes_audenaert_term(eps, dim_B) + alicki_fannes_term(eps, dim_B)


def _close_term(epsilon: float, dim_B: int) -> float:
    if not 0.0 <= epsilon <= 2.0:
        raise DomainError(f"epsilon {epsilon!r} outside [0, 2]")
    return float(epsilon * np.log2(dim_B) + (2 + epsilon) * binary_entropy(epsilon / (2 + epsilon)))


def close_degradable_bounds(epsilon: float, dim_B: int, q1_of_nearby: float):
    """Intervals for ``Q`` and ``P`` of a channel ε-close to a degradable one.

    Lower ends are clamped at zero since capacities are nonnegative.
    """
    d = _close_term(epsilon, dim_B)
    q = (max(0.0, q1_of_nearby - d), q1_of_nearby + d)
    p = (max(0.0, q1_of_nearby - 2 * d), q1_of_nearby + 2 * d)
    return q, p


def close_antidegradable_bounds(epsilon: float, dim_B: int):
    """Interval ``[0, 2d]`` containing both ``Q`` and ``P``."""
    return 0.0, 2 * _close_term(epsilon, dim_B)


def close_to_eps_degradable(epsilon: float) -> float:
    """ε-degradability level ``ε + 2√ε`` guaranteed for an ε-close-degradable channel."""
    if not 0.0 <= epsilon <= 2.0:
        raise DomainError(f"epsilon {epsilon!r} outside [0, 2]")
    return float(epsilon + 2 * np.sqrt(epsilon))
