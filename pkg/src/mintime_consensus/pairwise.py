"""Earliest meeting time of two agents' attainable sets and the touching point.

Two fuel-saturated boundary families can carry the first contact (the upper
arc of one set against the lower arc of the other), and two one-switch
families do the same when contact happens before the budget binds
(tf < beta).  Every candidate produced here is certified: it is an exactly
attainable state of both agents at its time, so the minimum over candidates
is the first-contact time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import boundary
from .boundary import SequenceTag
from .dynamics import Params, State
from .exceptions import Infeasible, InfeasiblePair, NoFiniteTime, NoSolutionFound
from .numerics import Poly, maximize_1d, real_roots

_TINY_Q = 1e-12


@dataclass(frozen=True)
class PairCandidate:
    t: float
    x: State
    pairing: tuple            # (tag_i, tag_j)
    saturated: bool
    kind: str                 # 'arc-max', 'tangency', 'corner'


@dataclass(frozen=True)
class PairResult:
    t_bar: float
    x_bar: State
    pairing: tuple | None
    candidates: tuple = field(default=(), repr=False)


def _combined_relation(tag_i, x0i, tag_j, x0j, beta, b):
    """Eliminate x2 between the two families: returns BiPoly D(w, q) = 0."""
    Xi, Ri = boundary.arc_system(tag_i, x0i, beta, b)
    Xj, Rj = boundary.arc_system(tag_j, x0j, beta, b)
    return Rj.mul_wpoly(Xi) - Ri.mul_wpoly(Xj), (Xi, Ri)


def _saturated_candidates(x0i, x0j, p: Params):
    """Maximize q(w) over each facing-arc pairing; candidates with tf >= beta."""
    b, beta = p.b, p.beta
    q_cap = math.exp(-b * beta)
    x1_lo = max(x0i[0], x0j[0]) - beta / b
    x1_hi = min(x0i[0], x0j[0]) + beta / b
    if x1_hi <= x1_lo:
        return []
    w_lo = math.exp((b**2 / 2.0) * x1_lo)
    w_hi = math.exp((b**2 / 2.0) * x1_hi)
    out = []
    for tag_i, tag_j in ((SequenceTag.S1, SequenceTag.S3), (SequenceTag.S3, SequenceTag.S1)):
        D, (Xi, Ri) = _combined_relation(tag_i, x0i, tag_j, x0j, beta, b)
        m = D.mat  # columns: q^0, q^1
        d0 = Poly.of(m[:, 0])
        d1 = Poly.of(m[:, 1])

        def q_of_w(w, d0=d0, d1=d1):
            den = float(d1(w))
            if den == 0.0:
                return -np.inf
            q = -float(d0(w)) / den
            if not (_TINY_Q < q <= q_cap * (1.0 + 1e-12)):
                return -np.inf
            return q

        w_star, q_star = maximize_1d(q_of_w, w_lo, w_hi, tol=1e-12)
        if not np.isfinite(q_star) or q_star <= 0:
            continue
        q_star = min(q_star, q_cap)
        x2 = -float(Ri(w_star, q_star)) / float(Xi(w_star))
        x1 = 2.0 * math.log(w_star) / b**2
        tf = -math.log(q_star) / b
        try:
            boundary.switching_times(tag_i, (x1, x2), x0i, beta, b, tf, q_star)
            boundary.switching_times(tag_j, (x1, x2), x0j, beta, b, tf, q_star)
        except Infeasible:
            continue
        out.append(PairCandidate(tf, State(x1, x2), (tag_i, tag_j), True, "arc-max"))
    return out


def _unsat_quadratic(sign_i, x0i, sign_j, x0j, b):
    """Coefficient polys (a, B, c) in r of a(r) w^2 + B(r) w + c(r) = 0."""
    Xi, Ri = boundary.arc_system_unconstrained(sign_i, x0i, b)
    Xj, Rj = boundary.arc_system_unconstrained(sign_j, x0j, b)
    D = Rj.mul_wpoly(Xi) - Ri.mul_wpoly(Xj)
    D, _ = D.strip_w_factor()
    m = D.mat
    rows = [Poly.of(m[i, :]) for i in range(m.shape[0])]
    while len(rows) < 3:
        rows.append(Poly.of([0.0]))
    return rows[2], rows[1], rows[0], (Xi, Ri)


def _unsat_feasible(sign, x1h, x0, b, tf, slack):
    s = boundary.one_switch_time(sign, x1h, x0[0], b, tf)
    return -slack <= s <= tf + slack


def _unsaturated_candidates(x0i, x0j, p: Params):
    """First contacts with tf <= beta: arc tangency plus corner-on-arc contacts."""
    b, beta = p.b, p.beta
    r_lo = math.exp(-b * beta / 2.0)
    if r_lo >= 1.0 - 1e-14:
        return []
    out = []
    tagof = {1: SequenceTag.S1, -1: SequenceTag.S3}
    for sign_i, sign_j in ((1, -1), (-1, 1)):
        a, B, c, (Xi, Ri) = _unsat_quadratic(sign_i, x0i, sign_j, x0j, b)
        disc = B * B - 4.0 * (a * c)
        try:
            roots = real_roots(disc, r_lo, 1.0 - 1e-12, tol=p.root_tol)
        except ValueError:
            roots = []
        for r in roots:
            av = float(a(r))
            if av == 0.0:
                continue
            w = -float(B(r)) / (2.0 * av)
            if w <= 0.0:
                continue
            tf = -2.0 * math.log(r) / b
            x1 = 2.0 * math.log(w) / b**2
            slack = 1e-9 * (1.0 + tf)
            if not (_unsat_feasible(sign_i, x1, x0i, b, tf, slack)
                    and _unsat_feasible(sign_j, x1, x0j, b, tf, slack)):
                continue
            x2 = -float(Ri(w, r)) / float(Xi(w))
            out.append(PairCandidate(tf, State(x1, x2),
                                     (tagof[sign_i], tagof[sign_j]), False, "tangency"))
    # corner of one agent landing on the other's arc
    for corner_x0, other_x0, swap in ((x0i, x0j, False), (x0j, x0i, True)):
        for g_corner in (1, -1):
            for g_other in (1, -1):
                poly = _corner_residual_poly(corner_x0, g_corner, other_x0, g_other, b)
                try:
                    roots = real_roots(poly, r_lo, 1.0 - 1e-12, tol=p.root_tol)
                except ValueError:
                    continue
                for r in roots:
                    tf = -2.0 * math.log(r) / b
                    x1 = corner_x0[0] + g_corner * tf / b
                    x2 = r**2 * corner_x0[1] - (g_corner / b**2) * (1.0 - r**2)
                    slack = 1e-9 * (1.0 + tf)
                    if not _unsat_feasible(g_other, x1, other_x0, b, tf, slack):
                        continue
                    ti = tagof[g_corner] if not swap else tagof[g_other]
                    tj = tagof[g_other] if not swap else tagof[g_corner]
                    out.append(PairCandidate(tf, State(x1, x2), (ti, tj), False, "corner"))
    return out


def _corner_residual_poly(corner_x0, g_corner, other_x0, g_other, b) -> Poly:
    """Residual in r of the pure-bang corner of one agent on the other's arc.

    Corner: x1 = x10c + g tf / b so w = (1/w10c) r^{-g};
            x2 = r^2 x20c - (g/b^2)(1 - r^2).
    Substituted into the other agent's one-switch relation and cleared of the
    single possible negative power of r.
    """
    Xo, Ro = boundary.arc_system_unconstrained(g_other, other_x0, b)
    w10c = math.exp(-(b**2 / 2.0) * corner_x0[0])
    A = 1.0 / w10c
    e = -g_corner  # w = A * r^e
    # x2(r) = c0 + c2 r^2
    c0 = -g_corner / b**2
    c2 = corner_x0[1] + g_corner / b**2
    terms = {}  # power -> coeff, allowing power e*i + j with i in {0,1}, j <= 2

    def add(power, coeff):
        terms[power] = terms.get(power, 0.0) + coeff

    xc = np.asarray(Xo.coeffs)
    for i, xi in enumerate(xc):          # X(w) * x2
        if xi == 0.0:
            continue
        add(e * i + 0, xi * A**i * c0)
        add(e * i + 2, xi * A**i * c2)
    m = Ro.mat
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            if m[i, j] != 0.0:
                add(e * i + j, m[i, j] * A**i)
    shift = -min(0, min(terms))
    coeffs = np.zeros(max(terms) + shift + 1)
    for power, coeff in terms.items():
        coeffs[power + shift] += coeff
    return Poly.of(coeffs)


def min_pair_time(x0i, x0j, p: Params) -> PairResult:
    """Minimum horizon at which the two attainable sets intersect.

    Raises InfeasiblePair when the x1 gap exceeds 2*beta/b and NoFiniteTime
    on the exact-equality (asymptotic-only) case.
    """
    x0i = tuple(float(v) for v in x0i)
    x0j = tuple(float(v) for v in x0j)
    if x0i == x0j:
        return PairResult(0.0, State(*x0i), None)
    gap = abs(x0i[0] - x0j[0])
    limit = 2.0 * p.beta / p.b
    if abs(gap - limit) <= p.feas_tol:
        raise NoFiniteTime(f"x1 gap {gap} equals 2*beta/b = {limit}; asymptotic only")
    if gap > limit:
        raise InfeasiblePair(f"x1 gap {gap} exceeds 2*beta/b = {limit}")
    candidates = _saturated_candidates(x0i, x0j, p) + _unsaturated_candidates(x0i, x0j, p)
    if not candidates:
        raise NoSolutionFound("no feasible boundary contact found for the pair")
    best = min(candidates, key=lambda cand: cand.t)
    return PairResult(best.t, best.x, best.pairing, tuple(sorted(candidates, key=lambda c: c.t)))
