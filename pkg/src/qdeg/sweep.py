"""Parameter sweeps for the depolarizing and BB84 families.

Each row solves the degradability program, evaluates the ε-degradability
bound next to the older closed-form members, and the lower convex envelope of
all members is taken across the grid.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .capacity import u_xi
from .entropy import alicki_fannes_term, binary_entropy, fannes_audenaert_term
from .errors import QdegError
from .hull import hull_of_curves
from .sdp.programs import epsilon_degradable
from .zoo import bb84, bb84_q1, depolarizing, depolarizing_q1

log = logging.getLogger(__name__)


@dataclass
class SweepConfig:
    tol: float = 1e-8
    workers: int = 1
    with_u_xi: bool = False
    warm_start: bool = True


@dataclass
class SweepTable:
    family: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows], dtype=float)

    @property
    def flagged(self) -> bool:
        return any(r["status"] != "ok" for r in self.rows)


def thm1_i(q1: float, eps: float, dim_e: int) -> float:
    return q1 + fannes_audenaert_term(eps, dim_e) + alicki_fannes_term(eps, dim_e)


def depolarizing_prior_members(p: float) -> dict[str, float]:
    """Closed-form members of the older depolarizing hull."""
    g = 4 * (math.sqrt(1 - p) - 1 + p)
    return {
        "bound_1mh": 1 - binary_entropy(p),
        "bound_gamma": binary_entropy((1 + g) / 2) - binary_entropy(g / 2),
        "bound_linear": 1 - 4 * p,
    }


def bb84_prior_member(p: float) -> float:
    q = 2 * p * (1 - p)
    return binary_entropy(0.5 - q) - binary_entropy(q)


def _solve_row(channel, q1: float, cfg: SweepConfig, warm=None):
    t0 = time.perf_counter()
    try:
        rep = epsilon_degradable(channel, cfg.tol, verify=False, warm_start=warm)
    except QdegError as exc:
        log.warning("solver failure: %s", exc)
        return {"epsilon": math.nan, "thm1_i": math.nan, "status": "solver-failure",
                "seconds": time.perf_counter() - t0}, None
    row = {
        "epsilon": rep.epsilon,
        "thm1_i": thm1_i(q1, rep.epsilon, rep.dim_E),
        "status": "ok" if rep.solver["status"] == "optimal" else rep.solver["status"],
    }
    if cfg.with_u_xi:
        row["u_xi"] = u_xi(channel, rep.degrading_map)
    row["seconds"] = time.perf_counter() - t0
    return row, rep


def _depolarizing_point(args):
    p, cfg = args
    q1 = depolarizing_q1(p)
    row, _ = _solve_row(depolarizing(p), q1, cfg)
    return {"p": p, "q1": q1, **row, **depolarizing_prior_members(p)}


def _bb84_point(args):
    p, ratio, cfg = args
    pz = ratio * p
    q1 = bb84_q1(p, pz)
    row, _ = _solve_row(bb84(p, pz), q1, cfg)
    out = {"p_x": p, "p_z": pz, "q1": q1, **row}
    if ratio == 1:
        out["bound_bb84"] = bb84_prior_member(p)
    return out


def _run(points, worker, cfg: SweepConfig, build, warm_builder):
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(worker, points))
    if not cfg.warm_start:
        return [worker(pt) for pt in points]
    # sequential sweep reuses the previous solution as a starting point
    rows, warm = [], None
    for pt in points:
        channel, q1, extra = warm_builder(pt)
        row, rep = _solve_row(channel, q1, cfg, warm)
        if rep is not None:
            warm = rep
        rows.append(build(pt, q1, row, extra))
    return rows


def _finish(table: SweepTable, x: np.ndarray, members: list[str], t0: float, grid, cfg: SweepConfig):
    # failed rows carry NaN in the solver-derived columns only
    curves = [table.column(name) for name in members]
    hull = hull_of_curves(x, curves) if len(x) else np.zeros(0)
    for r, hv in zip(table.rows, hull):
        r["hull"] = float(hv)
    table.meta = {
        "family": table.family,
        "grid": [float(g) for g in grid],
        "tol": cfg.tol,
        "workers": cfg.workers,
        "warm_start": cfg.warm_start and cfg.workers == 1,
        "hull_members": members,
        "flagged": table.flagged,
        "seconds_total": time.perf_counter() - t0,
        "seconds_per_row": [r.pop("seconds") for r in table.rows],
    }
    return table


def sweep_depolarizing(p_grid, config: SweepConfig | None = None) -> SweepTable:
    """Rows for the depolarizing family over ``p_grid`` (sorted, within [0, 0.25])."""
    cfg = config or SweepConfig()
    grid = sorted(float(p) for p in p_grid)
    if grid and (grid[0] < 0 or grid[-1] > 0.25):
        raise QdegError("depolarizing sweep grid must lie in [0, 0.25]")
    t0 = time.perf_counter()
    members = ["thm1_i", "bound_1mh", "bound_gamma", "bound_linear"]
    cols = ["p", "q1", "epsilon", *members, "prior_hull", "hull"]
    if cfg.with_u_xi:
        cols.insert(4, "u_xi")
    cols.append("status")

    def warm_builder(p):
        return depolarizing(p), depolarizing_q1(p), None

    def build(p, q1, row, _):
        return {"p": p, "q1": q1, **row, **depolarizing_prior_members(p)}

    rows = _run([(p, cfg) for p in grid], _depolarizing_point, cfg,
                lambda pt, q1, row, extra: build(pt[0], q1, row, extra),
                lambda pt: warm_builder(pt[0]))
    table = SweepTable("depolarizing", cols, rows)
    x = np.array(grid)
    prior = hull_of_curves(x, [table.column(m) for m in members[1:]]) if len(x) else np.zeros(0)
    for r, v in zip(table.rows, prior):
        r["prior_hull"] = float(v)
    return _finish(table, x, members, t0, grid, cfg)


def sweep_bb84(p_grid, ratio: float = 1.0, config: SweepConfig | None = None) -> SweepTable:
    """Rows for ``bb84(p, ratio·p)`` over ``p_grid``."""
    cfg = config or SweepConfig()
    ratio = float(ratio)
    grid = sorted(float(p) for p in p_grid)
    if grid and (grid[0] < 0 or ratio * grid[-1] > 0.5 or grid[-1] > 0.5):
        raise QdegError("bb84 sweep grid leaves the parameter domain")
    t0 = time.perf_counter()
    members = ["thm1_i"] + (["bound_bb84"] if ratio == 1 else [])
    cols = ["p_x", "p_z", "q1", "epsilon", *members, "hull", "status"]
    if cfg.with_u_xi:
        cols.insert(5, "u_xi")

    def build(pt, q1, row, _):
        p = pt[0]
        out = {"p_x": p, "p_z": ratio * p, "q1": q1, **row}
        if ratio == 1:
            out["bound_bb84"] = bb84_prior_member(p)
        return out

    rows = _run([(p, ratio, cfg) for p in grid], _bb84_point, cfg, build,
                lambda pt: (bb84(pt[0], ratio * pt[0]), bb84_q1(pt[0], ratio * pt[0]), None))
    table = SweepTable(f"bb84(ratio={ratio:g})", cols, rows)
    table = _finish(table, np.array(grid), members, t0, grid, cfg)
    table.meta["ratio"] = ratio
    return table


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return "%.9g" % v


def emit_csv(table: SweepTable, path: str | os.PathLike, meta: bool = True) -> None:
    """Write the table as CSV; runtimes and settings go to ``path + '.meta.json'``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.columns)
        for r in table.rows:
            w.writerow([_fmt(r.get(c, math.nan)) for c in table.columns])
    if meta:
        with open(f"{os.fspath(path)}.meta.json", "w") as fh:
            json.dump(table.meta, fh, indent=2, sort_keys=True)


def read_csv(path: str | os.PathLike) -> list[dict]:
    with open(path, newline="") as fh:
        out = []
        for r in csv.DictReader(fh):
            out.append({k: (v if k == "status" else float(v)) for k, v in r.items()})
        return out
