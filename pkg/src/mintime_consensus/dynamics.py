"""Exact propagation of a damped second-order agent under piecewise-constant thrust.

The agent obeys x1' = u/b and x2' = -b*x2 - u/b with |u| <= 1 and damping
b > 0.  The state-transition matrix is diag(1, e^{-b dt}), so propagation
under constant input has a closed form and carries no integration error.
Fuel is the L1 norm of the input; for a two-switch (on/off/on) profile it
equals tf - t2 + t1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidSchedule


class State(NamedTuple):
    """Planar agent state: position-like x1 and damped velocity-like x2."""

    x1: float
    x2: float


@dataclass(frozen=True)
class Params:
    """Fleet-wide constants and numerical tolerances.

    Args:
        b: damping coefficient, > 0.
        beta: per-agent fuel budget, >= 0 (time units).
        root_tol: polynomial root certification tolerance.
        feas_tol: slack used when classifying feasibility and ordering times.
        membership_eps: geometric tolerance for set-membership tests.
    """

    b: float
    beta: float
    root_tol: float = 1e-10
    feas_tol: float = 1e-9
    membership_eps: float = 1e-6

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"damping must be positive, got b={self.b}")
        if self.beta < 0:
            raise ValueError(f"fuel budget must be non-negative, got beta={self.beta}")
        for name in ("root_tol", "feas_tol", "membership_eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class BangOffBang:
    """Two-switch control law: gamma1 on [0, t1], off on [t1, t2], gamma2 on [t2, tf]."""

    gamma1: int
    t1: float
    t2: float
    gamma2: int
    tf: float

    def __post_init__(self):
        if self.gamma1 not in (-1, 1) or self.gamma2 not in (-1, 1):
            raise InvalidSchedule(f"levels must be +-1, got {self.gamma1}, {self.gamma2}")
        if not (0.0 <= self.t1 <= self.t2 <= self.tf):
            raise InvalidSchedule(
                f"need 0 <= t1 <= t2 <= tf, got t1={self.t1}, t2={self.t2}, tf={self.tf}"
            )

    @property
    def fuel(self) -> float:
        return self.tf - self.t2 + self.t1

    def u_at(self, t: float) -> float:
        """Input value at time t (right-continuous at the switches)."""
        if t < self.t1:
            return float(self.gamma1)
        if t < self.t2:
            return 0.0
        if t <= self.tf:
            return float(self.gamma2)
        return 0.0


def make_schedule(gamma1, t1, t2, gamma2, tf, tol=1e-9) -> BangOffBang:
    """Build a schedule, snapping float-noise violations of the ordering within tol."""
    t1 = min(max(t1, 0.0), tf)
    if t2 < t1 - tol:
        raise InvalidSchedule(f"t2={t2} < t1={t1} beyond tolerance")
    t2 = min(max(t2, t1), tf)
    return BangOffBang(int(gamma1), float(t1), float(t2), int(gamma2), float(tf))


def propagate_constant(x, u, dt, p: Params) -> State:
    """Propagate a state under constant input u for duration dt (exact).

    Accepts scalars or numpy arrays in the state components; broadcasts.
    """
    x1, x2 = x
    if np.any(np.asarray(dt) < 0):
        raise ValueError("dt must be non-negative")
    if np.any(np.abs(np.asarray(u)) > 1 + 1e-12):
        raise ValueError("input magnitude must not exceed 1")
    decay = np.exp(-p.b * dt)
    return State(x1 + u * dt / p.b, decay * x2 - (u / p.b**2) * (1.0 - decay))


def terminal_states(x0, gamma1, t1, t2, gamma2, tf, p: Params) -> State:
    """Terminal state of the three-leg profile; t1/t2 may be arrays for batch sweeps."""
    x = propagate_constant(x0, np.asarray(gamma1, dtype=float), t1, p)
    x = propagate_constant(x, 0.0, np.asarray(t2) - np.asarray(t1), p)
    x = propagate_constant(x, np.asarray(gamma2, dtype=float), tf - np.asarray(t2), p)
    return x


def fuel(ctl: BangOffBang) -> float:
    """Fuel consumed by a two-switch profile: tf - t2 + t1."""
    return ctl.fuel


def simulate(x0, ctl: BangOffBang, p: Params, samples: int = 200):
    """Simulate a schedule from x0.

    Returns:
        times: (samples,) uniform grid including 0 and tf.
        states: (samples, 2) states along the trajectory.
        terminal: exact terminal State from chaining the three legs.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    times = np.linspace(0.0, ctl.tf, samples)
    x_at_t1 = propagate_constant(x0, float(ctl.gamma1), ctl.t1, p)
    x_at_t2 = propagate_constant(x_at_t1, 0.0, ctl.t2 - ctl.t1, p)
    terminal = propagate_constant(x_at_t2, float(ctl.gamma2), ctl.tf - ctl.t2, p)

    leg1 = times <= ctl.t1
    leg2 = (times > ctl.t1) & (times <= ctl.t2)
    leg3 = times > ctl.t2
    states = np.empty((samples, 2))
    s = propagate_constant(x0, float(ctl.gamma1), times[leg1], p)
    states[leg1, 0], states[leg1, 1] = s.x1, s.x2
    s = propagate_constant(x_at_t1, 0.0, times[leg2] - ctl.t1, p)
    states[leg2, 0], states[leg2, 1] = s.x1, s.x2
    s = propagate_constant(x_at_t2, float(ctl.gamma2), times[leg3] - ctl.t2, p)
    states[leg3, 0], states[leg3, 1] = s.x1, s.x2
    return times, states, State(float(terminal.x1), float(terminal.x2))
