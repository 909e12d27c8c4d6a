"""Shared fixtures: the published six-agent case and random instance generators."""

import numpy as np
import pytest

from mintime_consensus.dynamics import Params

# six-agent worked case (b = 1, beta = 0.7) with its published solution
GOLDEN_B = 1.0
GOLDEN_BETA = 0.7
GOLDEN_AGENTS = np.array([
    [0.04, 0.1],
    [0.39, 1.05],
    [0.3, -0.525],
    [0.5, -0.525],
    [0.2, -0.2],
    [0.1, -0.05],
])
GOLDEN_T = 1.4918
GOLDEN_X = (0.2781, 0.0941)
GOLDEN_TABLE = {
    # id: (fuel, t1, t2, (gamma1, gamma2))
    "a1": (0.7000, 0.4690, 1.2609, (1, -1)),
    "a2": (0.7000, 0.4060, 1.1978, (-1, 1)),
    "a3": (0.7000, 0.3390, 1.1309, (1, -1)),
    "a4": (0.2687, 0.0234, 1.2465, (1, -1)),
    "a5": (0.6009, 0.3395, 1.2304, (1, -1)),
    "a6": (0.6983, 0.4382, 1.2317, (1, -1)),
}


@pytest.fixture(scope="session")
def golden_params():
    return Params(b=GOLDEN_B, beta=GOLDEN_BETA)


@pytest.fixture(scope="session")
def golden_agents():
    return GOLDEN_AGENTS.copy()


def random_instance(rng, n_agents, b_range=(0.2, 3.0), beta_range=(0.1, 1.5),
                    margin=0.9):
    """Random fleet satisfying the strict feasibility gap with some margin."""
    b = float(rng.uniform(*b_range))
    beta = float(rng.uniform(*beta_range))
    width = 2.0 * beta / b * margin
    x1 = rng.uniform(-width / 2.0, width / 2.0, n_agents) + rng.uniform(-0.5, 0.5)
    x2 = rng.uniform(-1.0, 1.0, n_agents)
    return Params(b=b, beta=beta), np.column_stack([x1, x2])


def rk4_constant_input(x0, u, dt, b, steps=4000):
    """Reference integrator for a single constant-input leg (vectorizable)."""
    x1 = np.asarray(x0[0], dtype=float).copy()
    x2 = np.asarray(x0[1], dtype=float).copy()
    h = np.asarray(dt, dtype=float) / steps

    def f2(x2v):
        return -b * x2v - u / b

    for _ in range(steps):
        k1 = f2(x2)
        k2 = f2(x2 + h / 2 * k1)
        k3 = f2(x2 + h / 2 * k2)
        k4 = f2(x2 + h * k3)
        x2 = x2 + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x1 = x1 + h * (u / b)
    return x1, x2
