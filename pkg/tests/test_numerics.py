import math

import numpy as np
import pytest

from conftest import GOLDEN_AGENTS, GOLDEN_BETA, GOLDEN_B, GOLDEN_T
from mintime_consensus.dynamics import Params
from mintime_consensus.numerics import (BiPoly, Poly, maximize_1d, real_roots,
                                        resultant_eliminate)


class TestRealRoots:
    def test_cubic_with_endpoint_roots(self):
        # q^3 - q on [0, 1]: roots exactly at the interval ends
        roots = real_roots([0.0, -1.0, 0.0, 1.0], 0.0, 1.0)
        assert roots == pytest.approx([0.0, 1.0], abs=1e-10)
        interior = real_roots([0.0, -1.0, 0.0, 1.0], 1e-6, 1.0 - 1e-6)
        assert interior == []

    def test_constructed_factorization(self):
        # (q - 0.3)(q - 0.7)(q + 2)
        c = np.polynomial.polynomial.polyfromroots([0.3, 0.7, -2.0])
        roots = real_roots(c, 0.0, 1.0)
        assert roots == pytest.approx([0.3, 0.7], abs=1e-10)

    def test_double_root_tangency(self):
        c = np.polynomial.polynomial.polyfromroots([0.5, 0.5])
        roots = real_roots(c, 0.0, 1.0, tol=1e-10)
        assert len(roots) == 1
        assert roots[0] == pytest.approx(0.5, abs=1e-5)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            real_roots([0.0, 0.0], 0.0, 1.0)

    def test_constant_polynomial_has_no_roots(self):
        assert real_roots([3.0], -1.0, 1.0) == []

    def test_certification_on_random_polys(self):
        rng = np.random.default_rng(9)
        for _ in range(150):
            deg = rng.integers(1, 9)
            c = rng.normal(size=deg + 1)
            p = Poly.of(c / np.abs(c).max())
            for r in real_roots(p, -2.0, 2.0, tol=1e-10):
                assert abs(p(r)) <= 1e-10 * (1.0 + np.abs(np.asarray(p.coeffs)).sum())

    def test_golden_scenario_cubic_contains_decay_value(self, golden_params):
        from mintime_consensus.boundary import SequenceTag
        from mintime_consensus.triplet import Scenario, eliminated_polynomial
        scenario = Scenario((SequenceTag.S1, SequenceTag.S3, SequenceTag.S1), True, 0)
        poly = eliminated_polynomial(scenario, GOLDEN_AGENTS[:3], golden_params)
        roots = real_roots(poly, 1e-9, 1.0)
        assert any(abs(r - math.exp(-GOLDEN_B * GOLDEN_T)) < 1e-4 for r in roots)


class TestResultant:
    def test_hand_elimination_linear(self):
        f = BiPoly.of([[-2.0], [1.0]])          # w - 2
        g = BiPoly.of([[0.0], [0.0, 1.0]]) - BiPoly.of([[4.0]])  # w q - 4
        res = resultant_eliminate(f, g, "w")
        roots = real_roots(res, 0.0, 5.0)
        assert roots == pytest.approx([2.0], abs=1e-12)
        # sign convention of the 2x2 Sylvester determinant: -(4 - 2q)
        assert np.asarray(res.coeffs)[:2] == pytest.approx([-4.0, 2.0])

    def test_hand_elimination_quadratic(self):
        f = BiPoly.of([[0.0, -1.0], [0.0, 0.0], [1.0, 0.0]])   # w^2 - q
        g = BiPoly.of([[-1.0], [1.0]])                         # w - 1
        res = resultant_eliminate(f, g, "w")
        assert real_roots(res, 0.0, 2.0) == pytest.approx([1.0], abs=1e-12)

    def test_degree_zero_in_eliminated_variable_rejected(self):
        f = BiPoly.of([[1.0, 2.0]])
        with pytest.raises(ValueError):
            resultant_eliminate(f, f, "w")

    def test_planted_common_roots_survive_projection(self):
        rng = np.random.default_rng(21)
        done = 0
        while done < 200:
            ws, qs = rng.uniform(0.2, 2.0), rng.uniform(0.2, 0.9)
            # random combinations of generators vanishing at (ws, qs)
            basis = [
                np.array([[-ws], [1.0]]),                       # w - ws
                np.array([[-qs, 1.0]]),                         # q - qs
            ]

            def random_member():
                coefs = rng.normal(size=2)
                m = np.zeros((3, 3))
                # shift (w - ws) by powers of q and (q - qs) by powers of w;
                # a shared w factor would plant a second common root at w = 0
                # over the same q, doubling the resultant root
                shifts = (rng.integers(0, 2), rng.integers(0, 2))
                for coef, gen, axis, s in zip(coefs, basis, (1, 0), shifts):
                    shifted = np.zeros((3, 3))
                    i, j = (0, s) if axis == 1 else (s, 0)
                    shifted[i:i + gen.shape[0], j:j + gen.shape[1]] = gen
                    m += coef * shifted
                return BiPoly.of(m)

            f, g = random_member(), random_member()
            # keep transversal intersections: a tangential crossing projects to
            # a double root whose real part is conditioned like sqrt(eps)
            jac = np.array([[f.deriv_w()(ws, qs), f.deriv_q()(ws, qs)],
                            [g.deriv_w()(ws, qs), g.deriv_q()(ws, qs)]], dtype=float)
            if abs(np.linalg.det(jac)) < 0.1:
                continue
            try:
                res = resultant_eliminate(f, g, "w")
            except ValueError:
                continue
            if res.degree < 1:
                continue
            roots = real_roots(res, 0.0, 1.0)
            assert any(abs(r - qs) < 1e-8 for r in roots), (ws, qs, res.coeffs)
            done += 1


class TestMaximize:
    def test_parabola(self):
        x, v = maximize_1d(lambda w: -(w - 0.5) ** 2, 0.0, 1.0)
        assert x == pytest.approx(0.5, abs=1e-8)
        assert v == pytest.approx(0.0, abs=1e-12)

    def test_linear_boundary_max(self):
        x, v = maximize_1d(lambda w: w, 0.0, 1.0)
        assert x == pytest.approx(1.0, abs=1e-8)

    def test_empty_interval_raises(self):
        with pytest.raises(ValueError):
            maximize_1d(lambda w: w, 1.0, 0.0)

    def test_all_infeasible_reports_minus_inf(self):
        x, v = maximize_1d(lambda w: float("nan"), 0.0, 1.0)
        assert v == float("-inf")

    def test_returned_max_dominates_random_probes(self):
        rng = np.random.default_rng(2)

        def f(w):
            return math.sin(5 * w) + 0.3 * w

        _, v = maximize_1d(f, 0.0, 3.0, tol=1e-10)
        probes = rng.uniform(0.0, 3.0, 1000)
        assert all(v >= f(x) - 1e-10 for x in probes)

    def test_pairwise_rate_max_below_golden_time(self, golden_params):
        # the first two agents of the six-agent case meet no later than the fleet
        from mintime_consensus.pairwise import min_pair_time
        res = min_pair_time(GOLDEN_AGENTS[0], GOLDEN_AGENTS[1], golden_params)
        assert res.t_bar <= GOLDEN_T + 1e-6
