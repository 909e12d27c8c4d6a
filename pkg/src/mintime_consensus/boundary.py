"""Attainable-set boundaries for a fuel-budgeted damped agent.

With fuel budget beta and horizon tf, the attainable set from x0 is convex.
For tf >= beta its boundary consists of four arcs, one per extremal switching
pattern: (+1,0,-1), (-1,0,-1), (-1,0,+1), (+1,0,+1), each flown with the
fuel budget fully spent (tf - t2 + t1 = beta).  For tf <= beta the fuel
constraint is inactive and the boundary is traced by the two one-switch
bang-bang families instead.

Exponentials are removed by the substitution
    qf = e^{-b tf},  w1 = e^{(b^2/2) x1},
    l1 = e^{(b/2)(beta - b x10)},  l2 = e^{-(b/2)(beta + b x10)},
which turns each boundary family into a low-degree polynomial relation among
(w1, x2, qf).  The relations used here are re-derived from the exact
propagation in :mod:`.dynamics` (see tests), not transcribed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import geometry
from .dynamics import Params, State, terminal_states
from .exceptions import Infeasible
from .numerics import BiPoly, Poly


class SequenceTag(Enum):
    """Extremal switching patterns (first level, off, last level)."""

    S1 = (1, -1)
    S2 = (-1, -1)
    S3 = (-1, 1)
    S4 = (1, 1)

    @property
    def signs(self):
        return self.value


@dataclass(frozen=True)
class Substitution:
    """Exponential-to-polynomial substitution values for one agent.

    l1, l2, w10 depend only on (x10, beta, b); qf and w1 carry the point of
    interest (time tf and abscissa x1).  Invariant: l1 * l2 == w10 ** 2.
    """

    qf: float
    w1: float
    l1: float
    l2: float
    w10: float
    b: float

    @classmethod
    def at(cls, x0, beta: float, b: float, tf: float = None, x1: float = None):
        l1, l2, w10 = agent_constants(x0, beta, b)
        qf = math.exp(-b * tf) if tf is not None else float("nan")
        w1 = math.exp((b**2 / 2.0) * x1) if x1 is not None else float("nan")
        return cls(qf=qf, w1=w1, l1=l1, l2=l2, w10=w10, b=b)


def agent_constants(x0, beta: float, b: float):
    """(l1, l2, w10) for an agent at x0 with fuel budget beta."""
    x10 = x0[0]
    l1 = math.exp((b / 2.0) * (beta - b * x10))
    l2 = math.exp((-b / 2.0) * (beta + b * x10))
    w10 = math.exp(-(b**2 / 2.0) * x10)
    return l1, l2, w10


def boundary_residual(tag: SequenceTag, sub: Substitution, x20: float, w1, x2, qf):
    """Residual of the boundary relation for one switching family.

    Zero residual means (w1, x2, qf) lies on that family's curve (switching
    feasibility not included).  Accepts scalars or arrays in (w1, x2, qf).
    """
    if np.any(np.asarray(w1) <= 0) or np.any(np.asarray(qf) <= 0):
        raise ValueError("w1 and qf must be positive")
    b2 = sub.b**2
    if tag is SequenceTag.S1:
        return x2 - qf * x20 + (qf * w1 * sub.l1 - qf - 1.0 + w1 * sub.l2) / b2
    if tag is SequenceTag.S3:
        return w1 * x2 - w1 * qf * x20 + (-qf / sub.l2 + qf * w1 + w1 - 1.0 / sub.l1) / b2
    if tag is SequenceTag.S2:
        return w1 - 1.0 / sub.l1
    return w1 - 1.0 / sub.l2


def switching_times(tag: SequenceTag, xhat, x0, beta: float, b: float, tf: float, qf: float):
    """Switch instants (t1, t2) steering x0 to xhat at tf with fuel exactly beta.

    Raises Infeasible when the required logarithm argument is non-positive
    (S2/S4) or when the result violates 0 <= t1 <= t2 <= tf.
    """
    x1h, x2h = xhat[0], xhat[1]
    x10, x20 = x0[0], x0[1]
    if tag is SequenceTag.S1:
        t1 = (beta + b * (x1h - x10)) / 2.0
        t2 = tf + (b * (x1h - x10) - beta) / 2.0
    elif tag is SequenceTag.S3:
        t1 = (beta - b * (x1h - x10)) / 2.0
        t2 = tf - (beta + b * (x1h - x10)) / 2.0
    elif tag is SequenceTag.S2:
        num = x2h * b**2 - qf * x20 * b**2 + qf - 1.0
        den = qf - math.exp(-b * beta)
        if den == 0.0 or num / den <= 0.0:
            raise Infeasible(f"S2 log argument non-positive (num={num}, den={den})")
        t1 = math.log(num / den) / b
        t2 = tf - beta + t1
    else:
        num = x2h * b**2 - qf * x20 * b**2 - qf + 1.0
        den = -qf + math.exp(-b * beta)
        if den == 0.0 or num / den <= 0.0:
            raise Infeasible(f"S4 log argument non-positive (num={num}, den={den})")
        t1 = math.log(num / den) / b
        t2 = tf - beta + t1
    slack = 1e-9 * (1.0 + tf)
    if not (-slack <= t1 <= t2 + slack and t2 <= tf + slack):
        raise Infeasible(
            f"switching ordering violated for {tag.name}: t1={t1}, t2={t2}, tf={tf}"
        )
    return min(max(t1, 0.0), tf), min(max(t2, max(t1, 0.0)), tf)


# ---------------------------------------------------------------------------
# polynomial forms of the boundary relations, used by the pair/triplet solvers
# ---------------------------------------------------------------------------

def arc_system(tag: SequenceTag, x0, beta: float, b: float):
    """Fuel-saturated family as X(w)*x2 + R(w, q) = 0, scaled by b^2.

    Returns (X, R) with X a Poly in w and R a BiPoly in (w, q).  Only S1/S3
    carry full relations; S2/S4 pin w and are handled by the callers.
    """
    l1, l2, _ = agent_constants(x0, beta, b)
    x20 = x0[1]
    b2 = b**2
    if tag is SequenceTag.S1:
        X = Poly.of([b2])
        R = BiPoly.of([[-1.0, -b2 * x20 - 1.0], [l2, l1]])
    elif tag is SequenceTag.S3:
        X = Poly.of([0.0, b2])
        R = BiPoly.of([[-1.0 / l1, -1.0 / l2], [1.0, -b2 * x20 + 1.0]])
    else:
        raise ValueError("S2/S4 pin w1 and have no (w, q) relation")
    return X, R


def pinned_w(tag: SequenceTag, x0, beta: float, b: float) -> float:
    """The fixed w1 value of an S2/S4 edge."""
    l1, l2, _ = agent_constants(x0, beta, b)
    if tag is SequenceTag.S2:
        return 1.0 / l1
    if tag is SequenceTag.S4:
        return 1.0 / l2
    raise ValueError("only S2/S4 pin w1")


def arc_system_unconstrained(sign: int, x0, b: float):
    """One-switch family (fuel inactive, tf <= beta) as X(w)*x2 + R(w, r) = 0.

    Here r = e^{-b tf / 2} = sqrt(qf).  sign=+1 is the (+1, -1) family (the
    limit of S1 as the coast vanishes), sign=-1 the (-1, +1) family.
    """
    x20 = x0[1]
    w10 = math.exp(-(b**2 / 2.0) * x0[0])
    b2 = b**2
    if sign == 1:
        X = Poly.of([b2])
        R = BiPoly.of([[-1.0, 0.0, -b2 * x20 - 1.0], [0.0, 2.0 * w10, 0.0]])
    elif sign == -1:
        X = Poly.of([0.0, b2])
        R = BiPoly.of([[0.0, -2.0 / w10, 0.0], [1.0, 0.0, -b2 * x20 + 1.0]])
    else:
        raise ValueError("sign must be +1 or -1")
    return X, R


def one_switch_time(sign: int, x1h: float, x10: float, b: float, tf: float) -> float:
    """Switch instant s of the one-switch profile reaching abscissa x1h at tf."""
    return (sign * b * (x1h - x10) + tf) / 2.0


# ---------------------------------------------------------------------------
# sampling and membership
# ---------------------------------------------------------------------------

def sample_boundary(x0, beta: float, b: float, tf: float, n: int = 2048) -> np.ndarray:
    """Convex CCW polygon approximating the attainable-set boundary.

    All returned vertices are exact terminal states of admissible extremal
    profiles, so the polygon is an inner approximation of the true set.
    """
    if tf <= 0:
        raise ValueError("boundary is empty for tf <= 0")
    if beta <= 0:
        raise ValueError("boundary degenerates to the drift point for beta <= 0")
    if n < 16:
        raise ValueError("need n >= 16 boundary samples")
    p = Params(b=b, beta=beta)
    pts = []
    if beta < tf:
        m = max(n // 4, 8)
        t1 = np.linspace(0.0, beta, m)
        t2 = np.minimum(t1 + (tf - beta), tf)
        for tag in SequenceTag:
            g1, g2 = tag.signs
            s = terminal_states(x0, g1, t1, t2, g2, tf, p)
            pts.append(np.column_stack([s.x1, s.x2]))
    else:
        m = max(n // 2, 8)
        s_grid = np.linspace(0.0, tf, m)
        for g in (1, -1):
            s = terminal_states(x0, g, s_grid, s_grid, -g, tf, p)
            pts.append(np.column_stack([s.x1, s.x2]))
    return geometry.convex_hull(np.vstack(pts))


def inner_deficit_bound(x0, beta: float, b: float, tf: float, n: int) -> float:
    """Chord sagitta bound for the inscribed boundary polygon at resolution n.

    Each smooth boundary arc is the graph of a curve whose second derivative
    in x1 is available in closed form, so the gap between the true set and the
    polygon's chords is at most max|x2''| * dx1^2 / 8 per family (the straight
    vertical edges contribute nothing).
    """
    l1, l2, w10 = agent_constants(x0, beta, b)
    qf = math.exp(-b * tf)
    b2 = b**2
    if beta < tf:
        m = max(n // 4, 8)
        dx1 = (2.0 * beta / b) / max(m - 1, 1)
        w_hi = math.exp((b2 / 2.0) * (x0[0] + beta / b))
        w_lo = math.exp((b2 / 2.0) * (x0[0] - beta / b))
        curv = max((qf * l1 + l2) * w_hi * b2 / 4.0,
                   (qf / l2 + 1.0 / l1) / w_lo * b2 / 4.0)
    else:
        m = max(n // 2, 8)
        dx1 = (2.0 * tf / b) / max(m - 1, 1)
        r = math.exp(-b * tf / 2.0)
        w_hi = math.exp((b2 / 2.0) * (x0[0] + tf / b))
        w_lo = math.exp((b2 / 2.0) * (x0[0] - tf / b))
        curv = max(r * w10 * w_hi * b2 / 2.0,
                   (r / w10) / w_lo * b2 / 2.0)
    return curv * dx1**2 / 8.0


def membership(pt, x0, beta: float, b: float, tf: float, p: Params, n: int = 2048) -> bool:
    """True if pt lies in the attainable set (within p.membership_eps).

    The sampled polygon is inscribed in the true convex set, so the tolerance
    is widened by the polygon's chord-deficit bound; a polygon membership test
    cannot resolve finer than its own discretization.
    """
    pt = np.asarray(pt, dtype=float)
    if tf <= p.feas_tol:
        return bool(np.hypot(pt[0] - x0[0], pt[1] - x0[1]) <= p.membership_eps)
    if beta <= p.feas_tol:
        drift = terminal_states(x0, 1, 0.0, tf, 1, tf, p)  # zero burn either side
        return bool(np.hypot(pt[0] - drift.x1, pt[1] - drift.x2) <= p.membership_eps)
    poly = sample_boundary(x0, beta, b, tf, n=n)
    eps = max(p.membership_eps, inner_deficit_bound(x0, beta, b, tf, n))
    return geometry.point_in_convex(pt, poly, eps=eps)


def infinite_limit_arcs(x0, beta: float, b: float):
    """The two explicit boundary curves of the infinite-horizon attainable set.

    Returns (upper, lower, (x1_lo, x1_hi)) where upper/lower map x1 -> x2 on
    the shared interval [x10 - beta/b, x10 + beta/b].  The set itself is the
    convex hull of the two curves (the hull closes the vertical gaps of width
    (1 - e^{-b beta})/b^2 at both ends).
    """
    if beta <= 0:
        raise ValueError("need beta > 0")
    l1, l2, _ = agent_constants(x0, beta, b)
    b2 = b**2

    def upper(x1):
        return (1.0 - np.exp((b2 / 2.0) * np.asarray(x1)) * l2) / b2

    def lower(x1):
        return (np.exp(-(b2 / 2.0) * np.asarray(x1)) - l1) / (l1 * b2)

    return upper, lower, (x0[0] - beta / b, x0[0] + beta / b)


def min_fuel_profile(x0, xhat, tf: float, b: float, beta_cap: float):
    """Cheapest two-switch profile steering x0 to xhat at exactly tf.

    For each boundary family the fuel beta' that puts xhat on that family
    solves a quadratic in z = e^{b beta'/2} whose two roots pair up as
    beta' and 2 tf - beta'; only the small root can satisfy beta' <= tf.
    Returns (beta_used, tag, t1, t2) with the smallest feasible fuel not
    exceeding beta_cap.  Raises NotReachable otherwise.
    """
    from .exceptions import NotReachable

    x1h, x2h = float(xhat[0]), float(xhat[1])
    x10, x20 = float(x0[0]), float(x0[1])
    q = math.exp(-b * tf)
    W = math.exp((b**2 / 2.0) * (x1h - x10))
    b2 = b**2
    slack = 1e-9 * (1.0 + tf)
    cap = min(beta_cap, tf) + slack
    candidates = []

    def try_family(tag, beta_used):
        if not (-slack <= beta_used <= cap):
            return
        beta_used = min(max(beta_used, 0.0), min(beta_cap, tf))
        try:
            t1, t2 = switching_times(tag, (x1h, x2h), (x10, x20),
                                     beta_used, b, tf, q)
        except Infeasible:
            return
        candidates.append((beta_used, tag, t1, t2))

    # (+1,0,-1): -q W z^2 + M z - W = 0
    M = q + 1.0 - b2 * (x2h - q * x20)
    disc = M * M - 4.0 * q * W * W
    if disc >= -1e-12 * (M * M + 4.0 * q * W * W):
        root = math.sqrt(max(disc, 0.0))
        for z in ((M - root) / (2.0 * q * W), (M + root) / (2.0 * q * W)):
            if z >= 1.0 - 1e-12:
                try_family(SequenceTag.S1, 2.0 * math.log(max(z, 1.0)) / b)
    # (-1,0,+1): q z^2 - M' W z + 1 = 0
    M2 = q + 1.0 + b2 * (x2h - q * x20)
    disc = (M2 * W) ** 2 - 4.0 * q
    if disc >= -1e-12 * ((M2 * W) ** 2 + 4.0 * q):
        root = math.sqrt(max(disc, 0.0))
        for z in ((M2 * W - root) / (2.0 * q), (M2 * W + root) / (2.0 * q)):
            if z >= 1.0 - 1e-12:
                try_family(SequenceTag.S3, 2.0 * math.log(max(z, 1.0)) / b)
    # (-1,0,-1) and (+1,0,+1) pin the abscissa displacement
    try_family(SequenceTag.S2, b * (x10 - x1h))
    try_family(SequenceTag.S4, b * (x1h - x10))

    if not candidates:
        raise NotReachable(
            f"state ({x1h}, {x2h}) not attainable from ({x10}, {x20}) "
            f"at tf={tf} with fuel <= {beta_cap}")
    candidates.sort(key=lambda c: (c[0], c[1].name))
    return candidates[0]


def limit_set_polygon(x0, beta: float, b: float, n: int = 512) -> np.ndarray:
    """Polygonal infinite-horizon attainable set (hull of the two limit arcs)."""
    upper, lower, (lo, hi) = infinite_limit_arcs(x0, beta, b)
    xs = np.linspace(lo, hi, max(n // 2, 8))
    pts = np.vstack([
        np.column_stack([xs, upper(xs)]),
        np.column_stack([xs, lower(xs)]),
    ])
    return geometry.convex_hull(pts)
