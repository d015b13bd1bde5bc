"""Dense primal-dual interior-point solver with Nesterov-Todd scaling.

Infeasible-start path following with a Mehrotra predictor-corrector. The
Schur complement ``M = Σ_k A_k (W_k ⊗ W_k) A_kᵀ`` is formed densely and
factored by Cholesky; problems handled here are at most a few thousand
equality rows.

The NT scaling of a block is computed as in CVXOPT: with ``X = L_x L_xᵀ``,
``S = L_s L_sᵀ`` and ``L_sᵀ L_x = U Λ Vᵀ``, the matrix ``R = L_x V Λ^{-1/2}``
satisfies ``Rᵀ S R = R⁻¹ X R⁻ᵀ = Λ``, so the scaled point is diagonal and the
Lyapunov solves in the corrector are elementwise.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ..errors import Infeasible, NumericalFailure
from .problem import SdpProblem, dump_triplets, presolve

log = logging.getLogger(__name__)

# dense columns materialized at once while forming the Schur complement
_CHUNK_BYTES = 64 * 2**20


@dataclass
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 200
    step: float = 0.98
    infeas_tol: float = 1e-8


@dataclass
class SdpSolution:
    """Result of :func:`solve_sdp`.

    ``gap`` is the absolute duality gap ``|c·x − b·y|``; ``status`` is one of
    ``"optimal"``, ``"max-iterations"`` or ``"infeasible"``.
    """

    status: str
    objective: float
    dual_objective: float
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    problem: SdpProblem = field(repr=False)
    seconds: float = 0.0

    def block(self, k: int) -> np.ndarray:
        return self.problem.block(self.x, k)

    def dual_block(self, k: int) -> np.ndarray:
        return self.problem.block(self.s, k)

    def diagnostics(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "primal_infeasibility": self.primal_infeasibility,
            "dual_infeasibility": self.dual_infeasibility,
            "iterations": self.iterations,
            "seconds": self.seconds,
        }


class _Cone:
    """Block bookkeeping for the flat-vector layout."""

    def __init__(self, problem: SdpProblem):
        self.n_lin = problem.n_lin
        self.blocks = list(problem.blocks)
        self.offsets = problem.offsets
        self.slices = [slice(o, o + n * n) for o, n in zip(self.offsets, self.blocks)]
        self.lin = slice(0, self.n_lin)

    def mats(self, v: np.ndarray):
        for n, sl in zip(self.blocks, self.slices):
            yield v[sl].reshape(n, n)

    def pack(self, lin: np.ndarray, mats) -> np.ndarray:
        parts = [np.asarray(lin, dtype=float).ravel()]
        parts += [np.asarray(m, dtype=float).ravel() for m in mats]
        return np.concatenate(parts)

    def identity(self) -> np.ndarray:
        return self.pack(np.ones(self.n_lin), [np.eye(n) for n in self.blocks])


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _max_step(lam: np.ndarray, d: np.ndarray) -> float:
    """Largest α with ``Λ + α d ⪰ 0`` for diagonal ``Λ`` (as a vector)."""
    if d.ndim == 1:
        ratio = d / lam
        worst = -np.min(ratio, initial=0.0)
    else:
        s = 1.0 / np.sqrt(lam)
        worst = -np.linalg.eigvalsh(_sym(d * np.outer(s, s)))[0]
    return np.inf if worst <= 0 else 1.0 / worst


class _Scaling:
    def __init__(self, cone: _Cone, x: np.ndarray, s: np.ndarray):
        xl, sl = x[cone.lin], s[cone.lin]
        self.lin_w = np.sqrt(xl / sl)
        self.lin_lam = np.sqrt(xl * sl)
        self.r, self.rinv, self.lam = [], [], []
        for xm, sm in zip(cone.mats(x), cone.mats(s)):
            lx = np.linalg.cholesky(_sym(xm))
            ls = np.linalg.cholesky(_sym(sm))
            _, sv, vt = np.linalg.svd(ls.T @ lx)
            r = lx @ vt.T / np.sqrt(sv)
            self.r.append(r)
            self.rinv.append(np.linalg.inv(r))
            self.lam.append(sv)
        self.w = [r @ r.T for r in self.r]


class InteriorPointSolver:
    """Backend implementing :func:`solve_sdp` with the NT-scaled IPM."""

    name = "ipm"

    def __init__(self, options: SolverOptions | None = None):
        self.options = options or SolverOptions()

    # -- linear algebra on the flat layout --------------------------------

    def _schur(self, a_csc: sp.csc_matrix, cone: _Cone, sc: _Scaling) -> np.ndarray:
        m = a_csc.shape[0]
        mat = np.zeros((m, m))
        if cone.n_lin:
            al = a_csc[:, cone.lin]
            mat += (al @ sp.diags(sc.lin_w ** 2) @ al.T).toarray()
        for n, sl, w in zip(cone.blocks, cone.slices, sc.w):
            ak = a_csc[:, sl].tocsr()
            rows = np.flatnonzero(np.diff(ak.indptr))
            if not len(rows):
                continue
            sub = ak[rows]
            chunk = max(1, _CHUNK_BYTES // (8 * n * n))
            out = np.empty((len(rows), len(rows)))
            for start in range(0, len(rows), chunk):
                stop = min(start + chunk, len(rows))
                k = stop - start
                # rows are symmetric, so (D W)ᵀ W = W D W; two large GEMMs
                dw = (sub[start:stop].toarray().reshape(k * n, n) @ w).reshape(k, n, n)
                scaled = (dw.transpose(0, 2, 1).reshape(k * n, n) @ w).reshape(k, n * n)
                out[:, start:stop] = sub @ scaled.T
            mat[np.ix_(rows, rows)] += out
        return _sym(mat)

    def _factor(self, mat: np.ndarray):
        diag = np.diag(mat).copy()
        scale = max(np.max(np.abs(diag)), 1.0)
        for reg in (0.0, 1e-14, 1e-12, 1e-10):
            try:
                return sla.cho_factor(mat + reg * scale * np.eye(len(mat)), lower=True, check_finite=False)
            except np.linalg.LinAlgError:
                continue
        raise NumericalFailure("Schur complement factorization failed")

    def _apply_w(self, cone: _Cone, sc: _Scaling, v: np.ndarray) -> np.ndarray:
        """``W v W`` blockwise (``w² v`` on the orthant)."""
        lin = sc.lin_w ** 2 * v[cone.lin]
        return cone.pack(lin, [w @ m @ w for w, m in zip(sc.w, cone.mats(v))])

    def _direction(self, a, at, cone, sc, factor, rp, rd, rc):
        rhs = rp - a @ (rc - self._apply_w(cone, sc, rd))
        dy = sla.cho_solve(factor, rhs, check_finite=False)
        ds = rd - at @ dy
        dx = rc - self._apply_w(cone, sc, ds)
        return dx, dy, ds

    def _scaled(self, cone, sc, dx, ds):
        """Scaled directions ``R⁻¹ΔX R⁻ᵀ`` and ``Rᵀ ΔS R`` per block."""
        lin = (dx[cone.lin] / sc.lin_w, ds[cone.lin] * sc.lin_w)
        mats = [
            (_sym(ri @ mx @ ri.T), _sym(r.T @ ms @ r))
            for r, ri, mx, ms in zip(sc.r, sc.rinv, cone.mats(dx), cone.mats(ds))
        ]
        return lin, mats

    def _steps(self, sc, lin, mats):
        ap = _max_step(sc.lin_lam, lin[0]) if len(sc.lin_lam) else np.inf
        ad = _max_step(sc.lin_lam, lin[1]) if len(sc.lin_lam) else np.inf
        for lam, (dx, ds) in zip(sc.lam, mats):
            ap = min(ap, _max_step(lam, dx))
            ad = min(ad, _max_step(lam, ds))
        return ap, ad

    def _initial_point(self, problem: SdpProblem, cone: _Cone, a: sp.csr_matrix):
        b, c = problem.b, problem.c
        a_csc = a.tocsc()
        lin = []
        xs, ss = [], []
        norm_rows = lambda sl: np.sqrt(np.asarray(a_csc[:, sl].multiply(a_csc[:, sl]).sum(axis=1)).ravel())
        blocks = [(1, cone.lin, True)] if cone.n_lin else []
        blocks += [(n, sl, False) for n, sl in zip(cone.blocks, cone.slices)]
        for n, sl, is_lin in blocks:
            width = cone.n_lin if is_lin else n
            rn = norm_rows(sl)
            zx = max(10.0, np.sqrt(width), width * np.max((1 + np.abs(b)) / (1 + rn), initial=1.0))
            zs = max(10.0, np.sqrt(width), np.max(rn, initial=0.0), np.linalg.norm(c[sl]))
            if is_lin:
                lin = (zx, zs)
            else:
                xs.append(zx * np.eye(n))
                ss.append(zs * np.eye(n))
        x = cone.pack(np.full(cone.n_lin, lin[0] if lin else 1.0), xs)
        s = cone.pack(np.full(cone.n_lin, lin[1] if lin else 1.0), ss)
        return x, np.zeros(a.shape[0]), s

    # -- main loop --------------------------------------------------------

    def solve(self, problem: SdpProblem, x0: np.ndarray | None = None) -> SdpSolution:
        opts = self.options
        t0 = time.perf_counter()
        cone = _Cone(problem)
        a = problem.a.tocsr()
        a_csc = a.tocsc()
        at = a.T.tocsr()
        b, c = problem.b, problem.c
        nu = problem.barrier_degree
        x, y, s = self._initial_point(problem, cone, a)
        if x0 is not None:
            # blend a previous primal point with the default start
            x = 0.5 * x + 0.5 * np.asarray(x0, dtype=float)
            if any(np.linalg.eigvalsh(_sym(m))[0] <= 0 for m in cone.mats(x)) or np.any(x[cone.lin] <= 0):
                x, _, _ = self._initial_point(problem, cone, a)
        nb, nc = 1.0 + np.linalg.norm(b), 1.0 + np.linalg.norm(c)

        status, it = "max-iterations", 0
        for it in range(1, opts.max_iter + 1):
            rp = b - a @ x
            rd = c - s - at @ y
            mu = float(x @ s) / nu
            pobj, dobj = float(c @ x), float(b @ y)
            pinf, dinf = np.linalg.norm(rp) / nb, np.linalg.norm(rd) / nc
            relgap = max(abs(pobj - dobj), abs(float(x @ s))) / (1.0 + abs(pobj) + abs(dobj))
            log.debug("it %3d pobj %.10e dobj %.10e gap %.2e pinf %.2e dinf %.2e",
                      it, pobj, dobj, relgap, pinf, dinf)
            if max(relgap, pinf, dinf) <= opts.tol:
                status = "optimal"
                break
            if dobj > 0 and np.linalg.norm(at @ y + s) <= opts.infeas_tol * dobj:
                status = "infeasible"
                break
            if pobj < 0 and np.linalg.norm(a @ x) <= opts.infeas_tol * -pobj:
                status = "infeasible"
                break
            try:
                sc = _Scaling(cone, x, s)
            except np.linalg.LinAlgError as exc:
                raise NumericalFailure(f"scaling breakdown at iteration {it}") from exc
            factor = self._factor(self._schur(a_csc, cone, sc))

            # predictor: scaled complementarity target 0
            rc = cone.pack(-x[cone.lin], [-xm for xm in cone.mats(x)])
            dx, dy, ds = self._direction(a, at, cone, sc, factor, rp, rd, rc)
            lin, mats = self._scaled(cone, sc, dx, ds)
            alpha = min(1.0, *self._steps(sc, lin, mats))
            mu_aff = float((x + alpha * dx) @ (s + alpha * ds)) / nu
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3

            # corrector: Λ∘(dx+ds) = σμI − Λ² − dxₐ∘dsₐ in scaled space
            lin_rhs = (sigma * mu - sc.lin_lam ** 2 - lin[0] * lin[1]) / sc.lin_lam
            lin_rc = sc.lin_w * lin_rhs
            mat_rc = []
            for r, lam, (sdx, sds) in zip(sc.r, sc.lam, mats):
                rhs = sigma * mu * np.eye(len(lam)) - np.diag(lam ** 2) - _sym(sdx @ sds)
                ymat = 2.0 * rhs / (lam[:, None] + lam[None, :])
                mat_rc.append(r @ ymat @ r.T)
            rc = cone.pack(lin_rc, mat_rc)
            dx, dy, ds = self._direction(a, at, cone, sc, factor, rp, rd, rc)
            lin, mats = self._scaled(cone, sc, dx, ds)
            # one step length for both sides keeps infeasibility and
            # complementarity shrinking at the same rate
            alpha = min(1.0, opts.step * min(self._steps(sc, lin, mats)))
            log.debug("    step %.3e sigma %.2e mu %.2e", alpha, sigma, mu)
            x = x + alpha * dx
            y = y + alpha * dy
            s = s + alpha * ds
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(s))):
                raise NumericalFailure(f"non-finite iterate at iteration {it}")

        rp = b - a @ x
        rd = c - s - at @ y
        pobj, dobj = float(c @ x), float(b @ y)
        return SdpSolution(
            status=status,
            objective=pobj,
            dual_objective=dobj,
            gap=abs(pobj - dobj),
            primal_infeasibility=float(np.linalg.norm(rp) / nb),
            dual_infeasibility=float(np.linalg.norm(rd) / nc),
            iterations=it,
            x=x, y=y, s=s,
            problem=problem,
            seconds=time.perf_counter() - t0,
        )


class CvxoptSolver:
    """Backend delegating to ``cvxopt.solvers.conelp`` (optional dependency)."""

    name = "cvxopt"

    def __init__(self, options: SolverOptions | None = None):
        self.options = options or SolverOptions()

    def solve(self, problem: SdpProblem, x0: np.ndarray | None = None) -> SdpSolution:
        import cvxopt

        t0 = time.perf_counter()
        cone = _Cone(problem)
        # conelp reads only the lower triangle of each PSD block, so the
        # variable is the orthant plus the lower triangles; P expands it to
        # the flat row-major layout and Q to CVXOPT's column-major blocks.
        n = problem.size
        p_rows, p_cols, q_rows = list(range(cone.n_lin)), list(range(cone.n_lin)), list(range(cone.n_lin))
        col = cone.n_lin
        for k, sl in zip(cone.blocks, cone.slices):
            for j in range(k):
                for i in range(j, k):
                    p_rows += [sl.start + i * k + j, sl.start + j * k + i] if i != j else [sl.start + i * k + i]
                    p_cols += [col, col] if i != j else [col]
                    q_rows += [sl.start + j * k + i, sl.start + i * k + j] if i != j else [sl.start + i * k + i]
                    col += 1
        ones = np.ones(len(p_rows))
        pmat = sp.csc_matrix((ones, (p_rows, p_cols)), shape=(n, col))
        qmat = sp.coo_matrix((-ones, (q_rows, p_cols)), shape=(n, col))
        dims = {"l": cone.n_lin, "q": [], "s": list(cone.blocks)}
        a = (problem.a @ pmat).tocoo()
        to_sp = lambda m: cvxopt.spmatrix(m.data.tolist(), m.row.tolist(), m.col.tolist(), m.shape)
        opts = {"abstol": self.options.tol, "reltol": self.options.tol, "feastol": self.options.tol,
                "maxiters": self.options.max_iter, "show_progress": False}
        sol = cvxopt.solvers.conelp(
            cvxopt.matrix(pmat.T @ problem.c), to_sp(qmat), cvxopt.matrix(np.zeros(n)), dims,
            to_sp(a), cvxopt.matrix(problem.b), options=opts,
        )
        x = pmat @ np.array(sol["x"]).ravel()
        y = -np.array(sol["y"]).ravel()
        z = np.array(sol["z"]).ravel()
        s = z[: cone.n_lin].tolist()
        for k, sl in zip(cone.blocks, cone.slices):
            lower = np.tril(z[sl].reshape(k, k).T)
            s += (lower + np.tril(lower, -1).T).ravel().tolist()
        s = np.array(s)
        status = {"optimal": "optimal", "primal infeasible": "infeasible",
                  "dual infeasible": "infeasible"}.get(sol["status"], "max-iterations")
        pobj, dobj = float(problem.c @ x), float(problem.b @ y)
        nb, nc = 1.0 + np.linalg.norm(problem.b), 1.0 + np.linalg.norm(problem.c)
        return SdpSolution(
            status=status, objective=pobj, dual_objective=dobj, gap=abs(pobj - dobj),
            primal_infeasibility=float(np.linalg.norm(problem.b - problem.a @ x) / nb),
            dual_infeasibility=float(np.linalg.norm(problem.c - s - problem.a.T @ y) / nc),
            iterations=int(sol["iterations"]), x=x, y=y, s=s, problem=problem,
            seconds=time.perf_counter() - t0,
        )


BACKENDS = {"ipm": InteriorPointSolver, "cvxopt": CvxoptSolver}


def solve_sdp(
    problem: SdpProblem,
    tol: float = 1e-8,
    *,
    backend: str = "ipm",
    max_iter: int = 200,
    x0: np.ndarray | None = None,
    raise_on_infeasible: bool = True,
) -> SdpSolution:
    """Presolve and solve a standard-form conic program.

    Raises
    ------
    Infeasible
        If the problem is detected infeasible (unless ``raise_on_infeasible``
        is false, in which case the solution carries ``status="infeasible"``).
    NumericalFailure
        On a factorization breakdown.
    """
    dump = os.environ.get("QDEG_DUMP_SDP")
    if dump:
        dump_triplets(problem, dump)
    reduced = presolve(problem)
    solver = BACKENDS[backend](SolverOptions(tol=tol, max_iter=max_iter))
    sol = solver.solve(reduced, x0=x0)
    if sol.status == "infeasible" and raise_on_infeasible:
        raise Infeasible("conic program is infeasible")
    return sol
