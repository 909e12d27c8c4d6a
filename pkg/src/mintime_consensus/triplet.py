"""Minimum meeting time for a triplet of agents.

Either the binding pair's touching point already lies in the third set
(case 1), or the first common point sits on all three boundaries (case 2).
Case 2 enumerates every assignment of boundary families to the three agents:
64 fuel-saturated scenarios plus 8 one-switch scenarios for contacts that
happen before the fuel budget binds.  Each scenario reduces to polynomial
elimination in the substituted variables; switching feasibility filters the
algebraic candidates down to genuine attainable states.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import boundary
from .boundary import SequenceTag
from .dynamics import BangOffBang, Params, State, make_schedule
from .exceptions import Infeasible, InfeasiblePair, InfeasibleTriplet, NoFiniteTime, NoSolutionFound
from .numerics import BiPoly, Poly, real_roots, resultant_eliminate, solve_2x2
from .pairwise import PairResult, min_pair_time

_PINNED = (SequenceTag.S2, SequenceTag.S4)
_UNSAT_SIGN = {SequenceTag.S1: 1, SequenceTag.S3: -1}


@dataclass(frozen=True)
class Scenario:
    """One assignment of boundary families to the agents (i, j, k)."""

    tags: tuple
    saturated: bool
    index: int

    def __str__(self):
        regime = "sat" if self.saturated else "free"
        return f"{self.index}:{regime}({','.join(t.name for t in self.tags)})"


@dataclass(frozen=True)
class ScenarioSolution:
    tf: float
    x_hat: State
    qf: float
    w1: float
    switch_times: tuple        # ((t1, t2) per agent) when feasible, else raw guesses
    feasible: bool
    scenario: Scenario


@dataclass(frozen=True)
class TripletResult:
    t_bar: float
    x_bar: State
    schedules: tuple           # 3 x BangOffBang
    tags: tuple
    case: int                  # 1 or 2
    scenario: Scenario | None
    pairwise: tuple            # the three PairResults


def enumerate_scenarios():
    """All 64 fuel-saturated tag triples followed by the 8 one-switch triples."""
    out = []
    idx = 0
    for tags in itertools.product(SequenceTag, repeat=3):
        out.append(Scenario(tags, True, idx))
        idx += 1
    for tags in itertools.product((SequenceTag.S1, SequenceTag.S3), repeat=3):
        out.append(Scenario(tags, False, idx))
        idx += 1
    return out


_ALL_SCENARIOS = enumerate_scenarios()


def _systems(scenario: Scenario, agents, p: Params):
    if scenario.saturated:
        return [boundary.arc_system(tag, x0, p.beta, p.b)
                for tag, x0 in zip(scenario.tags, agents)]
    return [boundary.arc_system_unconstrained(_UNSAT_SIGN[tag], x0, p.b)
            for tag, x0 in zip(scenario.tags, agents)]


def _pair_relation(sys_a, sys_b) -> BiPoly:
    (Xa, Ra), (Xb, Rb) = sys_a, sys_b
    return Rb.mul_wpoly(Xa) - Ra.mul_wpoly(Xb)


def eliminated_polynomial(scenario: Scenario, agents, p: Params) -> Poly:
    """Univariate polynomial (in q, or in r = sqrt(q) for one-switch scenarios)
    whose roots contain all candidate meeting times for the scenario."""
    if scenario.saturated and any(t in _PINNED for t in scenario.tags):
        raise ValueError("pinned scenarios reduce to a linear solve, not elimination")
    systems = _systems(scenario, agents, p)
    D1 = _pair_relation(systems[0], systems[1])
    D2 = _pair_relation(systems[1], systems[2])
    combo, k = (D1 + D2).strip_w_factor()
    if k >= 1 and combo.mat.shape[0] == 2:
        # shared-agent cancellation: quadratic x linear Sylvester, degree <= 3
        return resultant_eliminate(D1, combo, eliminate="w")
    return resultant_eliminate(D1, D2, eliminate="w")


def _newton_polish(D1: BiPoly, D2: BiPoly, w: float, q: float, steps: int = 4):
    d1w, d1q = D1.deriv_w(), D1.deriv_q()
    d2w, d2q = D2.deriv_w(), D2.deriv_q()
    for _ in range(steps):
        f1, f2 = float(D1(w, q)), float(D2(w, q))
        sol = solve_2x2(float(d1w(w, q)), float(d1q(w, q)),
                        float(d2w(w, q)), float(d2q(w, q)), -f1, -f2)
        if sol is None:
            break
        dw, dq = sol
        if not (np.isfinite(dw) and np.isfinite(dq)):
            break
        w_new, q_new = w + dw, q + dq
        if w_new <= 0.0 or q_new <= 0.0:
            break
        w, q = w_new, q_new
    return w, q


def _candidate_points(scenario: Scenario, agents, p: Params):
    """All positive (w, var) pairs solving the scenario's boundary system."""
    systems = _systems(scenario, agents, p)
    D1 = _pair_relation(systems[0], systems[1])
    D2 = _pair_relation(systems[1], systems[2])
    combo, k = (D1 + D2).strip_w_factor()
    linear = k >= 1 and combo.mat.shape[0] == 2
    poly = resultant_eliminate(D1, combo if linear else D2, eliminate="w")
    if poly.degree < 1:
        return [], systems
    if scenario.saturated:
        hi = math.exp(-p.b * p.beta)
    else:
        lo_r = math.exp(-p.b * p.beta / 2.0)
        hi = 1.0 - 1e-12
    lo = 1e-12 if scenario.saturated else lo_r
    if hi <= lo:
        return [], systems
    try:
        roots = real_roots(poly, lo, hi, tol=p.root_tol)
    except ValueError:
        return [], systems
    pts = []
    scale1 = max(np.abs(D1.mat).max(), 1e-300)
    scale2 = max(np.abs(D2.mat).max(), 1e-300)
    for v in roots:
        ws = []
        if linear:
            m = combo.mat
            den = float(Poly.of(m[1, :])(v))
            if den != 0.0:
                ws.append(-float(Poly.of(m[0, :])(v)) / den)
        if not ws:
            rows = D1.mat
            wpoly = Poly.of([float(Poly.of(rows[i, :])(v)) for i in range(rows.shape[0])])
            try:
                ws = [w for w in real_roots(wpoly, 1e-12, 1e12, tol=p.root_tol)]
            except ValueError:
                ws = []
            ws = [w for w in ws if abs(float(D2(w, v))) <= 1e-7 * scale2 * max(1.0, w**2)]
        for w in ws:
            if w <= 0.0:
                continue
            w2, v2 = _newton_polish(D1, D2, w, v)
            f1 = abs(float(D1(w2, v2))) / (scale1 * max(1.0, w2**2))
            f2 = abs(float(D2(w2, v2))) / (scale2 * max(1.0, w2**2))
            if f1 > 1e-8 or f2 > 1e-8:
                continue
            if w2 <= 0.0 or not (lo * 0.5 <= v2 <= hi * (1.0 + 1e-9)):
                continue
            pts.append((w2, v2))
    return pts, systems


def solve_scenario(scenario: Scenario, agents, p: Params):
    """All algebraic candidates of one scenario, each marked with feasibility."""
    if scenario.saturated:
        pins = [(idx, tag) for idx, tag in enumerate(scenario.tags) if tag in _PINNED]
        if len(pins) >= 2:
            return _solve_multi_pinned(scenario, agents, p, pins)
        if len(pins) == 1:
            return _solve_pinned(scenario, agents, p, pins[0])
    pts, systems = _candidate_points(scenario, agents, p)
    out = []
    for w, v in pts:
        qf = v if scenario.saturated else v * v
        tf = -math.log(qf) / p.b
        x1 = 2.0 * math.log(w) / p.b**2
        Xi, Ri = systems[0]
        xw = float(Xi(w))
        if xw == 0.0:
            continue
        x2 = -float(Ri(w, v)) / xw
        out.append(_finish_candidate(scenario, agents, p, tf, qf, w, State(x1, x2)))
    return out


def _finish_candidate(scenario, agents, p, tf, qf, w, x_hat) -> ScenarioSolution:
    times = []
    feasible = True
    for tag, x0 in zip(scenario.tags, agents):
        try:
            if scenario.saturated:
                t1, t2 = boundary.switching_times(tag, x_hat, x0, p.beta, p.b, tf, qf)
            else:
                s = boundary.one_switch_time(_UNSAT_SIGN[tag], x_hat.x1, x0[0], p.b, tf)
                slack = 1e-9 * (1.0 + tf)
                if not (-slack <= s <= tf + slack):
                    raise Infeasible(f"one-switch instant {s} outside [0, {tf}]")
                t1 = t2 = min(max(s, 0.0), tf)
        except Infeasible:
            feasible = False
            t1 = t2 = float("nan")
        times.append((t1, t2))
    return ScenarioSolution(tf, x_hat, qf, w, tuple(times), feasible, scenario)


def _solve_pinned(scenario, agents, p: Params, pin):
    """One S2/S4 tag fixes w; the other two relations are affine in (x2, q)."""
    pin_idx, pin_tag = pin
    w = boundary.pinned_w(pin_tag, agents[pin_idx], p.beta, p.b)
    rows = []
    for idx, (tag, x0) in enumerate(zip(scenario.tags, agents)):
        if idx == pin_idx:
            continue
        if tag in _PINNED:  # unreachable: len(pins) == 1
            continue
        X, R = boundary.arc_system(tag, x0, p.beta, p.b)
        m = R.mat
        a = float(X(w))                       # coeff of x2
        bq = float(Poly.of(m[:, 1])(w))       # coeff of q
        c = float(Poly.of(m[:, 0])(w))        # constant
        rows.append((a, bq, c))
    if len(rows) != 2:
        return []
    sol = solve_2x2(rows[0][0], rows[0][1], rows[1][0], rows[1][1],
                    -rows[0][2], -rows[1][2])
    if sol is None:
        return []
    x2, qf = sol
    q_cap = math.exp(-p.b * p.beta)
    if not (1e-12 < qf <= q_cap * (1.0 + 1e-9)):
        return []
    qf = min(qf, q_cap)
    tf = -math.log(qf) / p.b
    x1 = 2.0 * math.log(w) / p.b**2
    return [_finish_candidate(scenario, agents, p, tf, qf, w, State(x1, x2))]


def _solve_multi_pinned(scenario, agents, p: Params, pins):
    """Two or three pinned tags need coincident edges: generically empty."""
    ws = [boundary.pinned_w(tag, agents[idx], p.beta, p.b) for idx, tag in pins]
    if max(ws) - min(ws) > 1e-9 * (1.0 + max(ws)):
        return []
    # coincident vertical edges form a measure-zero configuration with a
    # one-parameter contact family; no isolated candidate to report
    return []


def min_triplet_time(x0i, x0j, x0k, p: Params) -> TripletResult:
    """Minimum meeting time and point for three agents, with their schedules."""
    agents = (tuple(map(float, x0i)), tuple(map(float, x0j)), tuple(map(float, x0k)))
    try:
        pr = (min_pair_time(agents[0], agents[1], p),
              min_pair_time(agents[1], agents[2], p),
              min_pair_time(agents[0], agents[2], p))
    except (InfeasiblePair, NoFiniteTime) as exc:
        raise InfeasibleTriplet(str(exc)) from exc
    pair_members = ((0, 1), (1, 2), (0, 2))
    order = max(range(3), key=lambda idx: pr[idx].t_bar)
    t_low = pr[order].t_bar
    x_touch = pr[order].x_bar
    third = ({0, 1, 2} - set(pair_members[order])).pop()

    if boundary.membership(x_touch, agents[third], p.beta, p.b, max(t_low, p.feas_tol),
                           p, n=4096):
        schedules, tags = _case1_schedules(pr[order], pair_members[order], third,
                                           agents, t_low, p)
        return TripletResult(t_low, x_touch, schedules, tags, 1, None, pr)

    feasible = []
    near = []
    for scenario in _ALL_SCENARIOS:
        for sol in solve_scenario(scenario, agents, p):
            if not sol.feasible:
                near.append(sol)
            elif sol.tf >= t_low - max(p.feas_tol, 1e-7 * (1.0 + t_low)):
                feasible.append(sol)
            else:
                near.append(sol)
    if not feasible:
        raise NoSolutionFound(
            f"no feasible three-boundary contact above the pairwise bound {t_low}",
            near_misses=near)
    best = min(feasible, key=lambda s: (s.tf, s.scenario.index))
    schedules = tuple(
        _schedule_from(tag, times, best.tf, p, best.scenario.saturated)
        for tag, times in zip(best.scenario.tags, best.switch_times))
    return TripletResult(best.tf, best.x_hat, schedules, best.scenario.tags, 2,
                         best.scenario, pr)


def _schedule_from(tag: SequenceTag, times, tf, p: Params, saturated: bool) -> BangOffBang:
    g1, g2 = tag.signs
    t1, t2 = times
    return make_schedule(g1, t1, t2, g2, tf)


def _case1_schedules(pair: PairResult, members, third, agents, tf, p: Params):
    tags = [None, None, None]
    schedules = [None, None, None]
    for slot, agent_idx in enumerate(members):
        tag = pair.pairing[slot] if pair.pairing else SequenceTag.S1
        beta_used, used_tag, t1, t2 = boundary.min_fuel_profile(
            agents[agent_idx], pair.x_bar, tf, p.b, p.beta)
        tags[agent_idx] = used_tag
        g1, g2 = used_tag.signs
        schedules[agent_idx] = make_schedule(g1, t1, t2, g2, tf)
    beta_used, used_tag, t1, t2 = boundary.min_fuel_profile(
        agents[third], pair.x_bar, tf, p.b, p.beta)
    tags[third] = used_tag
    g1, g2 = used_tag.signs
    schedules[third] = make_schedule(g1, t1, t2, g2, tf)
    return tuple(schedules), tuple(tags)
