"""Fleet-level planning: feasibility screening, the region of consensus,
triplet reduction to the fleet minimum time, and per-agent fuel re-budgeting.

For planar convex attainable sets, if every triplet of sets intersects at a
horizon then all of them do; and because intersections persist as the horizon
grows, the fleet minimum time is the maximum over all triplet minimum times.
The critical (arg-max) triplet fixes the meeting point; every other agent
reaches it with fuel to spare, so its budget is re-solved to pin a unique
two-switch schedule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import boundary, geometry
from .boundary import SequenceTag
from .dynamics import BangOffBang, Params, State, make_schedule
from .exceptions import InfeasibleFleet, NotReachable
from .pairwise import min_pair_time
from .triplet import TripletResult, min_triplet_time


class Feasibility(Enum):
    FINITE_TIME = "finite_time"
    ASYMPTOTIC_ONLY = "asymptotic_only"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Fleet:
    """Initial conditions plus shared parameters; ids label report rows."""

    agents: np.ndarray            # (N, 2) initial states
    params: Params
    ids: tuple = None

    def __post_init__(self):
        agents = np.atleast_2d(np.asarray(self.agents, dtype=float))
        if agents.ndim != 2 or agents.shape[1] != 2 or len(agents) < 1:
            raise ValueError("agents must be an (N, 2) array with N >= 1")
        if not np.all(np.isfinite(agents)):
            raise ValueError("agent states must be finite")
        object.__setattr__(self, "agents", agents)
        ids = self.ids or tuple(f"a{i + 1}" for i in range(len(agents)))
        if len(ids) != len(agents) or len(set(ids)) != len(ids):
            raise ValueError("ids must be unique and match the number of agents")
        object.__setattr__(self, "ids", tuple(str(s) for s in ids))

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def x1_max(self) -> float:
        return float(self.agents[:, 0].max())

    @property
    def x1_min(self) -> float:
        return float(self.agents[:, 0].min())


@dataclass(frozen=True)
class AgentPlan:
    index: int
    id: str
    schedule: BangOffBang
    fuel_used: float
    tag: SequenceTag


@dataclass(frozen=True)
class ConsensusOutcome:
    t_bar_f: float
    x_bar: State
    critical_triplet: tuple    # agent indices, or None for N <= 2
    plans: tuple               # AgentPlan per agent
    triplet_results: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class Region:
    """Region of consensus: the two bounding curves and their convex hull."""

    upper_arc: np.ndarray
    lower_arc: np.ndarray
    hull: np.ndarray
    interval: tuple

    @property
    def is_empty(self) -> bool:
        return len(self.hull) == 0

    def contains(self, pt, eps: float = 1e-9) -> bool:
        return geometry.point_in_convex(np.asarray(pt, float), self.hull, eps=eps)


def feasibility(fleet: Fleet) -> Feasibility:
    """Trichotomy on the x1 spread against 2*beta/b."""
    gap = fleet.x1_max - fleet.x1_min
    limit = 2.0 * fleet.params.beta / fleet.params.b
    if abs(gap - limit) <= fleet.params.feas_tol:
        return Feasibility.ASYMPTOTIC_ONLY
    return Feasibility.FINITE_TIME if gap < limit else Feasibility.INFEASIBLE


def region_of_consensus(fleet: Fleet, n: int = 512) -> Region:
    """Limiting agreement region of the two extreme agents, as a polygon.

    The upper curve belongs to the infinite-horizon set of the leftmost agent
    and the lower curve to that of the rightmost agent, both restricted to the
    shared interval [x1_max - beta/b, x1_min + beta/b].  This is the limit of
    the pairwise meeting region as the horizon grows; it is non-empty exactly
    when consensus is possible.  Note that finite-horizon attainable sets can
    transiently stick out of their own limit sets (the damped mode contracts),
    so the minimum-time meeting point is not guaranteed to lie inside.
    """
    verdict = feasibility(fleet)
    if verdict is Feasibility.INFEASIBLE:
        raise InfeasibleFleet("x1 spread exceeds 2*beta/b; no region of consensus")
    p = fleet.params
    i_min = int(np.argmin(fleet.agents[:, 0]))
    i_max = int(np.argmax(fleet.agents[:, 0]))
    lo = fleet.x1_max - p.beta / p.b
    hi = fleet.x1_min + p.beta / p.b
    upper_fn, _, _ = boundary.infinite_limit_arcs(fleet.agents[i_min], p.beta, p.b)
    _, lower_fn, _ = boundary.infinite_limit_arcs(fleet.agents[i_max], p.beta, p.b)
    if verdict is Feasibility.ASYMPTOTIC_ONLY:
        point = np.array([[lo, 0.0]])
        return Region(point.copy(), point.copy(), point.copy(), (lo, hi))
    xs = np.linspace(lo, hi, max(n // 2, 8))
    upper = np.column_stack([xs, upper_fn(xs)])
    lower = np.column_stack([xs, lower_fn(xs)])
    hull = geometry.convex_hull(np.vstack([upper, lower]))
    return Region(upper, lower, hull, (lo, hi))


def rebudget_fuel(x0, x_bar, t_bar_f: float, p: Params):
    """Smallest fuel putting x_bar on the agent's shrunken boundary at t_bar_f.

    Returns (beta_used, schedule).  Raises NotReachable when x_bar is outside
    the attainable set at the full budget.
    """
    beta_used, tag, t1, t2 = boundary.min_fuel_profile(x0, x_bar, t_bar_f, p.b, p.beta)
    g1, g2 = tag.signs
    return beta_used, make_schedule(g1, t1, t2, g2, t_bar_f)


def _plan_for(idx, fleet: Fleet, x_bar, t_bar) -> AgentPlan:
    x0 = fleet.agents[idx]
    if t_bar <= fleet.params.feas_tol:
        sched = BangOffBang(1, 0.0, t_bar, -1, t_bar)
        return AgentPlan(idx, fleet.ids[idx], sched, 0.0, SequenceTag.S1)
    beta_used, tag, t1, t2 = boundary.min_fuel_profile(
        x0, x_bar, t_bar, fleet.params.b, fleet.params.beta)
    g1, g2 = tag.signs
    return AgentPlan(idx, fleet.ids[idx], make_schedule(g1, t1, t2, g2, t_bar),
                     beta_used, tag)


def min_time_consensus(fleet: Fleet) -> ConsensusOutcome:
    """Fleet minimum meeting time, point, and all per-agent schedules."""
    verdict = feasibility(fleet)
    if verdict is not Feasibility.FINITE_TIME:
        raise InfeasibleFleet(f"fleet is {verdict.value}; finite-time consensus impossible")
    p = fleet.params
    agents = fleet.agents

    if fleet.n == 1:
        x0 = State(float(agents[0, 0]), float(agents[0, 1]))
        return ConsensusOutcome(0.0, x0, None, (_plan_for(0, fleet, x0, 0.0),))

    if fleet.n == 2:
        pair = min_pair_time(agents[0], agents[1], p)
        plans = tuple(_plan_for(i, fleet, pair.x_bar, pair.t_bar) for i in range(2))
        return ConsensusOutcome(pair.t_bar, pair.x_bar, None, plans)

    best = None
    best_triplet = None
    results = []
    for (i, j, k) in itertools.combinations(range(fleet.n), 3):
        res = min_triplet_time(agents[i], agents[j], agents[k], p)
        results.append(((i, j, k), res))
        if best is None or res.t_bar > best.t_bar + p.feas_tol:
            best = res
            best_triplet = (i, j, k)
    plans = tuple(_plan_for(i, fleet, best.x_bar, best.t_bar) for i in range(fleet.n))
    return ConsensusOutcome(best.t_bar, best.x_bar, best_triplet, plans,
                            triplet_results=tuple(results))
