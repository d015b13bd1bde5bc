"""Lower convex envelopes of sampled curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class EnvelopePoints:
    """Lower convex envelope sampled on the input abscissae.

    ``vertices_x``/``vertices_y`` are the hull corners; calling the object
    interpolates linearly between them (no extrapolation beyond the ends).
    """

    x: np.ndarray
    y: np.ndarray
    vertices_x: np.ndarray
    vertices_y: np.ndarray

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        if np.any(q < self.vertices_x[0] - 1e-12) or np.any(q > self.vertices_x[-1] + 1e-12):
            raise DomainError("query outside the hulled interval")
        return np.interp(q, self.vertices_x, self.vertices_y)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_convex_envelope(points) -> EnvelopePoints:
    """Lower hull by the monotone chain, re-evaluated at every input ``x``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise DomainError("need at least two (x, y) points")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    xs = pts[:, 0]
    if np.any(np.diff(xs) <= 0):
        if len(np.unique(xs)) != len(xs):
            raise DomainError("duplicate abscissae")
        raise DomainError("abscissae must be strictly increasing")
    hull: list = []
    for p in pts:
        # pop while the turn is clockwise or collinear
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    hv = np.array(hull)
    y = np.interp(xs, hv[:, 0], hv[:, 1])
    return EnvelopePoints(xs.copy(), y, hv[:, 0].copy(), hv[:, 1].copy())


def hull_of_curves(x, curves) -> np.ndarray:
    """Envelope of the pointwise minimum of several curves on a shared grid.

    NaN entries (failed evaluations) are ignored; columns where every curve
    is NaN are excluded from the hull and returned as NaN.
    """
    x = np.asarray(x, dtype=float)
    stack = np.vstack([np.asarray(c, dtype=float) for c in curves])
    valid = ~np.all(np.isnan(stack), axis=0)
    low = np.where(valid, np.nanmin(np.where(np.isnan(stack), np.inf, stack), axis=0), np.nan)
    out = np.full_like(x, np.nan)
    if valid.sum() >= 2:
        env = lower_convex_envelope(np.column_stack([x[valid], low[valid]]))
        out[valid] = env.y
    elif valid.sum() == 1:
        out[valid] = low[valid]
    return out
