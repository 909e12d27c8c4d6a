"""Exception types raised by the planners."""


class MinTimeConsensusError(Exception):
    """Base class for solver errors."""


class InvalidSchedule(MinTimeConsensusError, ValueError):
    """A two-switch control violates 0 <= t1 <= t2 <= tf."""


class Infeasible(MinTimeConsensusError):
    """Requested switching times do not exist (log argument <= 0 or ordering broken)."""


class InfeasiblePair(MinTimeConsensusError):
    """Two agents are too far apart in x1 to ever meet under the fuel budget."""


class NoFiniteTime(MinTimeConsensusError):
    """Agents can only agree asymptotically (initial x1 gap exactly 2*beta/b)."""


class InfeasibleTriplet(MinTimeConsensusError):
    """A triplet violates the pairwise x1-gap condition."""


class NoSolutionFound(MinTimeConsensusError):
    """No boundary-intersection scenario produced a feasible candidate."""

    def __init__(self, message, near_misses=None):
        super().__init__(message)
        self.near_misses = near_misses or []


class NotReachable(MinTimeConsensusError):
    """Target state is outside the agent's attainable set."""


class InfeasibleFleet(MinTimeConsensusError):
    """Fleet initial conditions do not admit finite-time consensus."""


class NoUpperBound(MinTimeConsensusError):
    """Brute-force search found no intersection at the supplied upper time."""
