"""Brute-force reference implementation used to cross-check the analytic solvers.

Attainable sets are approximated by propagating a dense grid of two-switch
profiles (all four sign patterns, all grid-feasible switch pairs) and taking
the convex hull.  Minimum meeting times come from bisection on the emptiness
of the running polygon intersection, which is valid because the intersection,
once non-empty, stays non-empty as the horizon grows.

Nothing here touches the substituted boundary equations; the only shared
ingredient with the analytic path is the exact propagation itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .dynamics import Params, State, terminal_states
from .exceptions import NoUpperBound

_SIGN_PATTERNS = ((1, -1), (-1, -1), (-1, 1), (1, 1))


@dataclass(frozen=True)
class Polygon:
    """Convex polygon, CCW vertex array; may be degenerate (point/segment) or empty."""

    vertices: np.ndarray

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def area(self) -> float:
        return geometry.polygon_area(self.vertices)

    def centroid(self) -> np.ndarray:
        return geometry.polygon_centroid(self.vertices)

    def contains(self, pt, eps: float = 0.0) -> bool:
        return geometry.point_in_convex(pt, self.vertices, eps=eps)


def sample_attainable(x0, beta: float, b: float, tf: float, grid=(400, 400)) -> Polygon:
    """Hull of terminal states over a (t1, t2) grid for all four sign patterns.

    Grid points violating t1 <= t2 or the fuel budget tf - t2 + t1 <= beta are
    dropped; every kept vertex is an exactly attainable state.
    """
    n1, n2 = grid
    if n1 < 50 or n2 < 50:
        raise ValueError("grid must be at least (50, 50)")
    if tf <= 0:
        return Polygon(np.asarray([[x0[0], x0[1]]], dtype=float))
    p = Params(b=b, beta=max(beta, 0.0))
    t1g, t2g = np.meshgrid(np.linspace(0.0, tf, n1), np.linspace(0.0, tf, n2), indexing="ij")
    mask = (t2g >= t1g) & (tf - t2g + t1g <= beta + 1e-15)
    t1v, t2v = t1g[mask], t2g[mask]
    # the uniform grid rarely hits the budget-saturated line t2 - t1 = tf - beta
    # exactly, leaving a first-order inner bias; sweep that line explicitly
    if beta < tf:
        t1e = np.linspace(0.0, beta, n1)
        t1v = np.concatenate([t1v, t1e])
        t2v = np.concatenate([t2v, np.minimum(t1e + (tf - beta), tf)])
    if len(t1v) == 0:  # beta == 0: only the drift profile
        t1v = np.array([0.0])
        t2v = np.array([tf])
    chunks = []
    for g1, g2 in _SIGN_PATTERNS:
        s = terminal_states(x0, g1, t1v, t2v, g2, tf, p)
        chunks.append(np.column_stack([s.x1, s.x2]))
    return Polygon(geometry.convex_hull(np.vstack(chunks)))


def polygon_intersect(P: Polygon, Q: Polygon) -> Polygon:
    """Convex intersection via Sutherland-Hodgman clipping."""
    if P.is_empty or Q.is_empty:
        return Polygon(np.zeros((0, 2)))
    return Polygon(geometry.clip_convex(P.vertices, Q.vertices))


def intersect_all(polys) -> Polygon:
    out = polys[0]
    for q in polys[1:]:
        out = polygon_intersect(out, q)
        if out.is_empty:
            return out
    return out


def oracle_min_time(agents, p: Params, t_hi: float, tol: float = 1e-4, grid=(400, 400)):
    """Bisect the smallest horizon at which all attainable sets intersect.

    Returns (t_star, witness State).  Raises NoUpperBound if the sets are
    still disjoint at t_hi.
    """
    agents = [np.asarray(a, dtype=float) for a in agents]
    if len(agents) == 1:
        return 0.0, State(float(agents[0][0]), float(agents[0][1]))
    if all(np.allclose(agents[0], a, atol=1e-12) for a in agents[1:]):
        return 0.0, State(float(agents[0][0]), float(agents[0][1]))

    def intersection_at(t: float) -> Polygon:
        polys = [sample_attainable(a, p.beta, p.b, t, grid=grid) for a in agents]
        return intersect_all(polys)

    hi = float(t_hi)
    top = intersection_at(hi)
    if top.is_empty:
        raise NoUpperBound(f"attainable sets disjoint at t_hi={t_hi}")
    lo = 0.0
    witness = top
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        inter = intersection_at(mid)
        if inter.is_empty:
            lo = mid
        else:
            hi = mid
            witness = inter
    c = witness.centroid()
    return hi, State(float(c[0]), float(c[1]))
