"""Minimum-time consensus planning for damped second-order agents.

Each agent follows x1' = u/b, x2' = -b x2 - u/b with |u| <= 1 and a fuel
budget on the integral of |u|.  The package computes the earliest time at
which every agent's attainable set shares a point, the meeting point itself,
and a two-switch schedule per agent, then cross-checks the result against a
brute-force geometric search.
"""

__version__ = "0.1.0"

from .boundary import SequenceTag, Substitution
from .consensus import (ConsensusOutcome, Feasibility, Fleet, feasibility,
                        min_time_consensus, region_of_consensus, rebudget_fuel)
from .dynamics import BangOffBang, Params, State, fuel, propagate_constant, simulate
from .estimator import MinimumTimeConsensus
from .pairwise import PairResult, min_pair_time
from .triplet import Scenario, ScenarioSolution, TripletResult, min_triplet_time

__all__ = [
    "BangOffBang",
    "ConsensusOutcome",
    "Feasibility",
    "Fleet",
    "MinimumTimeConsensus",
    "PairResult",
    "Params",
    "Scenario",
    "ScenarioSolution",
    "SequenceTag",
    "State",
    "Substitution",
    "TripletResult",
    "feasibility",
    "fuel",
    "min_pair_time",
    "min_time_consensus",
    "min_triplet_time",
    "propagate_constant",
    "rebudget_fuel",
    "region_of_consensus",
    "simulate",
    "__version__",
]
