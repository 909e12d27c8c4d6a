import math

import numpy as np
import pytest

from conftest import GOLDEN_AGENTS, GOLDEN_BETA, GOLDEN_B, GOLDEN_T, GOLDEN_TABLE, GOLDEN_X
from mintime_consensus import boundary, geometry
from mintime_consensus.boundary import SequenceTag, Substitution
from mintime_consensus.dynamics import Params, State, terminal_states
from mintime_consensus.exceptions import Infeasible, NotReachable

TAG_SIGNS = {
    SequenceTag.S1: (1, -1),
    SequenceTag.S2: (-1, -1),
    SequenceTag.S3: (-1, 1),
    SequenceTag.S4: (1, 1),
}


def _random_saturated(rng):
    b = rng.uniform(0.2, 3.0)
    beta = rng.uniform(0.05, 1.5)
    x0 = (rng.uniform(-1, 1), rng.uniform(-1, 1))
    tf = beta + rng.uniform(0.0, 2.0)
    t1 = rng.uniform(0.0, beta)
    t2 = t1 + tf - beta
    return b, beta, x0, tf, t1, t2


class TestResidualDerivation:
    """The polynomial boundary relations must agree with exact propagation."""

    @pytest.mark.parametrize("tag", [SequenceTag.S1, SequenceTag.S3])
    def test_fuel_saturated_endpoints_have_zero_residual(self, tag):
        rng = np.random.default_rng(hash(tag.name) % 2**32)
        for _ in range(400):
            b, beta, x0, tf, t1, t2 = _random_saturated(rng)
            g1, g2 = TAG_SIGNS[tag]
            p = Params(b=b, beta=beta)
            s = terminal_states(x0, g1, t1, t2, g2, tf, p)
            sub = Substitution.at(x0, beta, b, tf=tf, x1=float(s.x1))
            res = boundary.boundary_residual(tag, sub, x0[1], sub.w1, float(s.x2), sub.qf)
            assert abs(res) < 1e-9

    @pytest.mark.parametrize("tag", [SequenceTag.S2, SequenceTag.S4])
    def test_pinned_families_fix_the_abscissa(self, tag):
        rng = np.random.default_rng(hash(tag.name) % 2**32)
        for _ in range(200):
            b, beta, x0, tf, t1, t2 = _random_saturated(rng)
            g1, g2 = TAG_SIGNS[tag]
            p = Params(b=b, beta=beta)
            s = terminal_states(x0, g1, t1, t2, g2, tf, p)
            sub = Substitution.at(x0, beta, b, tf=tf, x1=float(s.x1))
            res = boundary.boundary_residual(tag, sub, x0[1], sub.w1, float(s.x2), sub.qf)
            assert abs(res) < 1e-9
            expect = x0[0] - beta / b if tag is SequenceTag.S2 else x0[0] + beta / b
            assert float(s.x1) == pytest.approx(expect, abs=1e-12)

    def test_zero_fuel_zero_time_stays_on_own_curve(self):
        b, beta = 1.3, 0.0
        x0 = (0.4, -0.2)
        sub = Substitution.at(x0, beta, b, tf=0.0, x1=x0[0])
        res = boundary.boundary_residual(SequenceTag.S1, sub, x0[1], sub.w1, x0[1], 1.0)
        assert abs(res) < 1e-14

    def test_published_meeting_point_on_first_agent_boundary(self):
        x0 = GOLDEN_AGENTS[0]
        sub = Substitution.at(x0, GOLDEN_BETA, GOLDEN_B, tf=GOLDEN_T, x1=GOLDEN_X[0])
        res = boundary.boundary_residual(SequenceTag.S1, sub, x0[1], sub.w1,
                                         GOLDEN_X[1], sub.qf)
        assert abs(res) <= 1e-3

    def test_domain_errors(self):
        sub = Substitution.at((0.0, 0.0), 0.5, 1.0, tf=1.0, x1=0.0)
        with pytest.raises(ValueError):
            boundary.boundary_residual(SequenceTag.S1, sub, 0.0, -1.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            boundary.boundary_residual(SequenceTag.S1, sub, 0.0, 1.0, 0.0, 0.0)


class TestSubstitution:
    def test_product_identity(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            b = rng.uniform(0.2, 3.0)
            beta = rng.uniform(0.0, 1.5)
            x10 = rng.uniform(-1.5, 1.5)
            sub = Substitution.at((x10, 0.0), beta, b, tf=1.0, x1=0.0)
            assert sub.l1 * sub.l2 == pytest.approx(sub.w10**2, rel=1e-12)

    def test_positive_and_bounded(self):
        sub = Substitution.at((0.3, 0.1), 0.7, 1.0, tf=2.0, x1=0.5)
        assert sub.qf > 0 and sub.qf <= 1.0
        assert min(sub.w1, sub.l1, sub.l2, sub.w10) > 0


class TestSwitchingTimes:
    def test_published_rows_recovered_from_meeting_point(self):
        # switching pairs reconstructed from (x_bar, t_bar, fuel) alone
        tags = {"a1": SequenceTag.S1, "a2": SequenceTag.S3, "a3": SequenceTag.S1,
                "a4": SequenceTag.S1, "a5": SequenceTag.S1, "a6": SequenceTag.S1}
        qf = math.exp(-GOLDEN_B * GOLDEN_T)
        for idx, (aid, (fuel_used, t1_ref, t2_ref, _)) in enumerate(GOLDEN_TABLE.items()):
            t1, t2 = boundary.switching_times(tags[aid], GOLDEN_X, GOLDEN_AGENTS[idx],
                                              fuel_used, GOLDEN_B, GOLDEN_T, qf)
            assert t1 == pytest.approx(t1_ref, abs=5e-4)
            assert t2 == pytest.approx(t2_ref, abs=5e-4)

    def test_zero_fuel_means_never_on(self):
        x0 = (0.25, -0.4)
        t1, t2 = boundary.switching_times(SequenceTag.S1, (x0[0], 0.0), x0, 0.0,
                                          1.0, 2.0, math.exp(-2.0))
        assert t1 == pytest.approx(0.0, abs=1e-12)
        assert t2 == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("tag", list(SequenceTag))
    def test_recovers_generating_switches(self, tag):
        rng = np.random.default_rng(hash(tag.name) % 1000 + 7)
        for _ in range(250):
            b, beta, x0, tf, t1, t2 = _random_saturated(rng)
            g1, g2 = TAG_SIGNS[tag]
            p = Params(b=b, beta=beta)
            s = terminal_states(x0, g1, t1, t2, g2, tf, p)
            got1, got2 = boundary.switching_times(tag, (float(s.x1), float(s.x2)),
                                                  x0, beta, b, tf, math.exp(-b * tf))
            assert got1 == pytest.approx(t1, abs=1e-8)
            assert got2 == pytest.approx(t2, abs=1e-8)

    def test_infeasible_log_argument_raises(self):
        # a state on the far side cannot be hit by the coast-then-brake family
        with pytest.raises(Infeasible):
            boundary.switching_times(SequenceTag.S2, (5.0, 5.0), (0.0, 0.0),
                                     0.5, 1.0, 2.0, math.exp(-2.0))


class TestSampleBoundary:
    def test_abscissa_extent_is_budget_over_damping(self):
        poly = boundary.sample_boundary(GOLDEN_AGENTS[0], GOLDEN_BETA, GOLDEN_B,
                                        GOLDEN_T, n=2048)
        assert poly[:, 0].min() == pytest.approx(0.04 - 0.7, abs=1e-9)
        assert poly[:, 0].max() == pytest.approx(0.04 + 0.7, abs=1e-9)

    def test_vertices_satisfy_some_boundary_relation(self):
        x0 = (0.1, -0.3)
        b, beta, tf = 1.4, 0.6, 1.9
        poly = boundary.sample_boundary(x0, beta, b, tf, n=256)
        qf = math.exp(-b * tf)
        for v in poly:
            sub = Substitution.at(x0, beta, b, tf=tf, x1=float(v[0]))
            residuals = [abs(boundary.boundary_residual(tag, sub, x0[1], sub.w1,
                                                        float(v[1]), qf))
                         for tag in SequenceTag]
            assert min(residuals) < 1e-6

    def test_convexity_of_midpoints(self):
        rng = np.random.default_rng(23)
        p_common = None
        for _ in range(60):
            b = rng.uniform(0.2, 3.0)
            beta = rng.uniform(0.1, 1.5)
            tf = rng.uniform(0.1, 2.5)
            x0 = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            p = Params(b=b, beta=beta)
            # random attainable endpoints via admissible profiles
            pts = []
            for _ in range(2):
                burn = rng.uniform(0.0, min(beta, tf))
                t1 = rng.uniform(0.0, burn)
                t2 = tf - (burn - t1)
                g1, g2 = TAG_SIGNS[list(SequenceTag)[rng.integers(0, 4)]]
                s = terminal_states(x0, g1, t1, t2, g2, tf, p)
                pts.append((float(s.x1), float(s.x2)))
            mid = ((pts[0][0] + pts[1][0]) / 2, (pts[0][1] + pts[1][1]) / 2)
            assert boundary.membership(mid, x0, beta, b, tf, p, n=1024)

    def test_budget_nesting(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            b = rng.uniform(0.2, 3.0)
            beta = rng.uniform(0.2, 1.5)
            beta_small = beta * rng.uniform(0.3, 0.95)
            tf = rng.uniform(0.3, 2.5)
            x0 = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            p = Params(b=b, beta=beta)
            inner = boundary.sample_boundary(x0, beta_small, b, tf, n=64)
            for v in inner:
                assert boundary.membership(v, x0, beta, b, tf, p, n=1024)

    def test_saturation_once_budget_exceeds_horizon(self):
        x0 = (0.2, 0.4)
        b, tf = 1.1, 0.8
        lo = boundary.sample_boundary(x0, tf * (1 - 1e-9), b, tf, n=512)
        hi = boundary.sample_boundary(x0, 10.0, b, tf, n=512)
        assert geometry.polygon_hausdorff(lo, hi) < 1e-5

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            boundary.sample_boundary((0, 0), 0.5, 1.0, 0.0)
        with pytest.raises(ValueError):
            boundary.sample_boundary((0, 0), 0.5, 1.0, 1.0, n=4)


class TestMembership:
    def test_attainable_point_is_member(self):
        p = Params(b=1.0, beta=0.7)
        s = terminal_states((0.1, 0.2), 1, 0.2, 0.9, -1, 1.2, p)
        assert boundary.membership((float(s.x1), float(s.x2)), (0.1, 0.2),
                                   0.7, 1.0, 1.2, p)

    def test_published_point_interior_for_slack_agent(self):
        p = Params(b=GOLDEN_B, beta=GOLDEN_BETA)
        assert boundary.membership(GOLDEN_X, GOLDEN_AGENTS[3], GOLDEN_BETA,
                                   GOLDEN_B, GOLDEN_T, p)

    def test_far_point_rejected(self):
        p = Params(b=GOLDEN_B, beta=GOLDEN_BETA)
        x0 = GOLDEN_AGENTS[3]
        far = (x0[0] + 2 * GOLDEN_BETA / GOLDEN_B, x0[1])
        assert not boundary.membership(far, x0, GOLDEN_BETA, GOLDEN_B, GOLDEN_T, p)

    def test_zero_horizon_is_singleton(self):
        p = Params(b=1.0, beta=0.7)
        assert boundary.membership((0.3, 0.4), (0.3, 0.4), 0.7, 1.0, 0.0, p)
        assert not boundary.membership((0.31, 0.4), (0.3, 0.4), 0.7, 1.0, 0.0, p)


class TestInfiniteLimit:
    def test_curves_match_vanishing_decay_residual(self):
        x0 = (0.15, -0.6)
        b, beta = 1.2, 0.8
        upper, lower, (lo, hi) = boundary.infinite_limit_arcs(x0, beta, b)
        for x1 in np.linspace(lo, hi, 7):
            sub = Substitution.at(x0, beta, b, tf=80.0, x1=float(x1))
            r_up = boundary.boundary_residual(SequenceTag.S1, sub, x0[1], sub.w1,
                                              float(upper(x1)), sub.qf)
            r_lo = boundary.boundary_residual(SequenceTag.S3, sub, x0[1], sub.w1,
                                              float(lower(x1)), sub.qf)
            assert abs(r_up) < 1e-8 and abs(r_lo) < 1e-8

    def test_endpoint_gaps_close_via_vertical_segments(self):
        # the two curves do not meet pointwise at the interval ends; the hull
        # closes through vertical segments of width (1 - e^{-b beta})/b^2
        x0 = (0.15, -0.6)
        b, beta = 1.2, 0.8
        upper, lower, (lo, hi) = boundary.infinite_limit_arcs(x0, beta, b)
        gap = (1.0 - math.exp(-b * beta)) / b**2
        assert float(upper(hi)) - float(lower(hi)) == pytest.approx(gap, abs=1e-12)
        assert float(upper(lo)) - float(lower(lo)) == pytest.approx(gap, abs=1e-12)
        assert float(upper(hi)) == pytest.approx(0.0, abs=1e-12)
        assert float(lower(lo)) == pytest.approx(0.0, abs=1e-12)

    def test_vanishing_budget_collapses_to_rest_point(self):
        x0 = (0.3, 0.9)
        b = 1.0
        upper, lower, (lo, hi) = boundary.infinite_limit_arcs(x0, 1e-9, b)
        assert hi - lo == pytest.approx(2e-9, rel=1e-6)
        assert float(upper(x0[0])) == pytest.approx(0.0, abs=1e-9)
        assert float(lower(x0[0])) == pytest.approx(0.0, abs=1e-9)

    def test_finite_horizon_sets_converge_to_limit(self):
        x0 = (0.0, 0.0)
        b, beta = 1.0, 0.7
        limit = boundary.limit_set_polygon(x0, beta, b, n=512)
        dists = []
        for tf in (1.0, 2.0, 4.0, 8.0, 16.0):
            poly = boundary.sample_boundary(x0, beta, b, tf, n=512)
            dists.append(geometry.polygon_hausdorff(poly, limit))
        assert all(d1 > d2 for d1, d2 in zip(dists, dists[1:]))
        assert dists[-1] < 5e-3


class TestMinFuelProfile:
    def test_recovers_published_slack_agent_budgets(self):
        for idx, aid in ((3, "a4"), (4, "a5"), (5, "a6")):
            fuel_ref, t1_ref, t2_ref, signs = GOLDEN_TABLE[aid]
            fuel, tag, t1, t2 = boundary.min_fuel_profile(
                GOLDEN_AGENTS[idx], GOLDEN_X, GOLDEN_T, GOLDEN_B, GOLDEN_BETA)
            assert fuel == pytest.approx(fuel_ref, abs=1e-3)
            assert (t1, t2) == pytest.approx((t1_ref, t2_ref), abs=1e-3)
            assert tag.signs == signs

    def test_full_budget_for_critical_agents(self):
        # the published meeting point is rounded to 4 digits, so it may fall
        # marginally outside the exact budget; solve uncapped and compare
        for idx in (0, 1, 2):
            fuel, _, _, _ = boundary.min_fuel_profile(
                GOLDEN_AGENTS[idx], GOLDEN_X, GOLDEN_T, GOLDEN_B, beta_cap=2.0)
            assert fuel == pytest.approx(GOLDEN_BETA, abs=1e-3)

    def test_drift_point_needs_no_fuel(self):
        x0 = (0.5, -0.7)
        b, tf = 1.3, 1.7
        drift = (x0[0], x0[1] * math.exp(-b * tf))
        fuel, _, _, _ = boundary.min_fuel_profile(x0, drift, tf, b, 1.0)
        assert fuel == pytest.approx(0.0, abs=1e-9)

    def test_unreachable_state_raises(self):
        with pytest.raises(NotReachable):
            boundary.min_fuel_profile((0.0, 0.0), (5.0, 0.0), 1.0, 1.0, 0.5)
