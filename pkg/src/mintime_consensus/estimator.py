"""Scikit-learn style front end for the fleet planner.

``MinimumTimeConsensus`` treats the (N, 2) array of agent initial states as
the data matrix: ``fit`` runs the planner and exposes the meeting time, the
meeting point, and the per-agent schedules as fitted attributes; ``predict``
evaluates the planned trajectories at requested times.  Parameters follow the
usual get_params/set_params protocol so the planner drops into pipelines and
grid searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .consensus import Feasibility, Fleet, feasibility, min_time_consensus, region_of_consensus
from .dynamics import Params, propagate_constant, simulate
from .exceptions import InfeasibleFleet


class MinimumTimeConsensus(BaseEstimator):
    """Plan the minimum-time meeting point of damped second-order agents.

    Parameters:
        b: damping coefficient (> 0).
        beta: per-agent fuel budget (>= 0).
        root_tol: polynomial root tolerance.
        feas_tol: feasibility classification slack.
        membership_eps: geometric membership tolerance.

    Attributes (after ``fit``):
        consensus_time_: minimum horizon at which all agents can meet.
        consensus_point_: (2,) meeting state.
        critical_triplet_: indices of the arg-max triplet (None for N <= 2).
        schedules_: list of BangOffBang schedules, one per agent.
        fuel_used_: (N,) fuel consumed by each schedule.
        control_signs_: (N, 2) first/last input levels per agent.
        feasibility_: the feasibility verdict for the fleet.
    """

    def __init__(self, b=1.0, beta=1.0, root_tol=1e-10, feas_tol=1e-9,
                 membership_eps=1e-6):
        self.b = b
        self.beta = beta
        self.root_tol = root_tol
        self.feas_tol = feas_tol
        self.membership_eps = membership_eps

    def _params(self) -> Params:
        return Params(b=self.b, beta=self.beta, root_tol=self.root_tol,
                      feas_tol=self.feas_tol, membership_eps=self.membership_eps)

    def _validate(self, X) -> np.ndarray:
        X = check_array(X, dtype=np.float64, ensure_2d=True)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 state columns (x1, x2), got {X.shape[1]}")
        return X

    def fit(self, X, y=None):
        """Plan for the fleet whose rows are agent initial states (x1, x2)."""
        X = self._validate(X)
        p = self._params()
        fleet = Fleet(X, p)
        self.feasibility_ = feasibility(fleet)
        if self.feasibility_ is not Feasibility.FINITE_TIME:
            raise InfeasibleFleet(
                f"fleet is {self.feasibility_.value}: x1 spread "
                f"{fleet.x1_max - fleet.x1_min} vs limit {2 * self.beta / self.b}")
        outcome = min_time_consensus(fleet)
        self.X_ = X
        self.n_features_in_ = 2
        self.outcome_ = outcome
        self.consensus_time_ = outcome.t_bar_f
        self.consensus_point_ = np.array(outcome.x_bar, dtype=float)
        self.critical_triplet_ = outcome.critical_triplet
        self.schedules_ = [plan.schedule for plan in outcome.plans]
        self.fuel_used_ = np.array([plan.fuel_used for plan in outcome.plans])
        self.control_signs_ = np.array(
            [[plan.schedule.gamma1, plan.schedule.gamma2] for plan in outcome.plans])
        return self

    def predict(self, T):
        """Agent states at the requested times.

        Args:
            T: array-like of times, shape (n_times,) or (n_times, 1).

        Returns:
            (n_times, n_agents, 2) array; times beyond the consensus horizon
            continue the common drift from the meeting point.
        """
        check_is_fitted(self, "outcome_")
        T = np.asarray(T, dtype=float).reshape(-1)
        if np.any(T < 0):
            raise ValueError("times must be non-negative")
        p = self._params()
        n_agents = len(self.X_)
        out = np.empty((len(T), n_agents, 2))
        tbar = self.consensus_time_
        xbar = self.consensus_point_
        for a, (x0, ctl) in enumerate(zip(self.X_, self.schedules_)):
            for it, t in enumerate(T):
                if t >= tbar:
                    s = propagate_constant(xbar, 0.0, t - tbar, p)
                    out[it, a] = (s.x1, s.x2)
                else:
                    x = propagate_constant(x0, float(ctl.gamma1), min(t, ctl.t1), p)
                    if t > ctl.t1:
                        x = propagate_constant(x, 0.0, min(t, ctl.t2) - ctl.t1, p)
                    if t > ctl.t2:
                        x = propagate_constant(x, float(ctl.gamma2), t - ctl.t2, p)
                    out[it, a] = (x.x1, x.x2)
        return out

    def consensus_region(self, n: int = 512):
        """Polygon of every state the fitted fleet could ever agree on."""
        check_is_fitted(self, "outcome_")
        return region_of_consensus(Fleet(self.X_, self._params()), n=n)

    def score(self, X=None, y=None):
        """Negative consensus time (larger is better), for model selection."""
        check_is_fitted(self, "outcome_")
        return -self.consensus_time_
