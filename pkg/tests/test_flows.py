"""Numeric flow integration and conservation drift."""

import numpy as np
import pytest

from dkp.curve import compute_curve
from dkp.flows import (
    CompiledPoly,
    KPStateNumeric,
    first_flow_rhs_numeric,
    flow_rhs,
    integrate,
    state_index,
)
from dkp.symalg import ExactPoly, gen_A, gen_B


class TestState:
    def test_random_in_range_and_deterministic(self):
        s1 = KPStateNumeric.random(3, 2, seed=5)
        s2 = KPStateNumeric.random(3, 2, seed=5)
        assert np.array_equal(s1.A, s2.A) and np.array_equal(s1.B, s2.B)
        assert s1.A.shape == (2, 3) and s1.B.shape == (2, 3)
        assert np.all((0.5 <= s1.A) & (s1.A <= 1.5))

    def test_flat_roundtrip(self):
        s = KPStateNumeric.random(3, 2, seed=1)
        r = KPStateNumeric.from_flat(3, 2, s.flat())
        assert np.array_equal(r.A, s.A) and np.array_equal(r.B, s.B)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            KPStateNumeric(2, 1, np.array([[1.0, np.inf]]), np.zeros((1, 2)))

    def test_compiled_poly_matches_exact_evaluation(self):
        idx = state_index(3, 2)
        p = (
            ExactPoly.var(gen_A(0, 0)) * ExactPoly.var(gen_B(2, 1)) * 3
            - ExactPoly.var(gen_A(1, 1), 2)
            + ExactPoly.const(7)
        )
        c = CompiledPoly(p, idx)
        s = KPStateNumeric.random(3, 2, seed=9)
        flat = s.flat()
        want = 3 * flat[idx[gen_A(0, 0)]] * flat[idx[gen_B(2, 1)]] - flat[
            idx[gen_A(1, 1)]
        ] ** 2 + 7
        assert c(flat) == pytest.approx(want, rel=1e-15)


class TestFlowRHS:
    def test_single_layer_closed_form(self):
        # dA(n) = B(n) - B(n+1); dB(n) = (A(n) - A(n-1)) B(n)
        N = 4
        s = KPStateNumeric.random(N, 1, seed=3)
        rhs = first_flow_rhs_numeric(s)
        A, B = s.A[0], s.B[0]
        for n in range(N):
            assert rhs[n] == pytest.approx(B[n] - B[(n + 1) % N], rel=1e-14)
            assert rhs[N + n] == pytest.approx(
                (A[n] - A[(n - 1) % N]) * B[n], rel=1e-14
            )

    def test_zero_A_degenerate_form(self):
        N, M = 3, 2
        rng = np.random.default_rng(11)
        s = KPStateNumeric(N, M, np.zeros((M, N)), rng.uniform(0.5, 1.5, (M, N)))
        rhs = flow_rhs("first", s)
        for m in range(M):
            for n in range(N):
                assert rhs[m * N + n] == pytest.approx(
                    s.B[m, n] - s.B[m, (n + 1) % N]
                )
                assert rhs[N * M + m * N + n] == 0.0

    @pytest.mark.parametrize("N,M", [(3, 2), (4, 1), (2, 3)])
    def test_two_code_paths_agree(self, N, M):
        s = KPStateNumeric.random(N, M, seed=7)
        direct = flow_rhs("first", s)
        bracket = flow_rhs(1, s)
        assert np.max(np.abs(direct - bracket)) < 1e-13

    def test_unknown_degree_rejected(self):
        s = KPStateNumeric.random(3, 2, seed=1)
        with pytest.raises(ValueError):
            flow_rhs(5, s)  # 5 is not a (3,2) ledger degree

    def test_casimir_degree_generates_zero_flow(self):
        s = KPStateNumeric.random(3, 2, seed=13)
        rhs = flow_rhs(3, s)  # q_3 is beta-free, a bracket-2 Casimir
        assert np.allclose(rhs, 0.0, atol=1e-15)


class TestIntegration:
    def test_zero_state_stationary(self):
        res = integrate(KPStateNumeric.zero(3, 2), "first", dt=1e-2, T=0.5)
        assert np.allclose(res.state.flat(), 0.0)
        assert res.max_drift == 0.0

    def test_drift_bound_and_order(self):
        seed = 20260817
        res = integrate(KPStateNumeric.random(3, 2, seed=seed), "first", 1e-3, 1.0)
        assert res.max_drift <= 1e-6
        res_half = integrate(
            KPStateNumeric.random(3, 2, seed=seed), "first", 5e-4, 1.0
        )
        # order-4 halving on the dominant quantity (linear q_1 sits at the
        # roundoff floor, so judge the max-drift quantity instead)
        d_star = max(res.drift, key=res.drift.get)
        ratio = res.drift[d_star] / res_half.drift[d_star]
        assert 8.0 <= ratio <= 32.0

    def test_ledger_flow_conserves(self):
        res = integrate(KPStateNumeric.random(3, 2, seed=2), 4, dt=1e-3, T=0.2)
        assert res.max_drift <= 1e-8

    def test_commuting_flows(self):
        seed, dt, T = 6, 1e-3, 0.1
        s0 = KPStateNumeric.random(3, 2, seed=seed)
        ab = integrate(integrate(s0, 1, dt, T).state, 4, dt, T).state.flat()
        s0 = KPStateNumeric.random(3, 2, seed=seed)
        ba = integrate(integrate(s0, 4, dt, T).state, 1, dt, T).state.flat()
        assert np.max(np.abs(ab - ba)) <= 1e-5

    def test_determinism(self):
        r1 = integrate(KPStateNumeric.random(3, 2, seed=4), "first", 1e-2, 0.3)
        r2 = integrate(KPStateNumeric.random(3, 2, seed=4), "first", 1e-2, 0.3)
        assert np.array_equal(r1.state.flat(), r2.state.flat())
        assert r1.drift == r2.drift

    def test_trajectory_recording(self):
        res = integrate(
            KPStateNumeric.random(3, 2, seed=8), "first", 1e-2, 0.1, record_every=5
        )
        assert res.steps == 10
        assert [frame["t"] for frame in res.trajectory] == pytest.approx(
            [0.0, 0.05, 0.1]
        )

    def test_nonfinite_abort(self):
        # a uniform state is a fixed point (kappa/rho rows sum to zero), so
        # blow-up needs asymmetric entries
        rng = np.random.default_rng(0)
        big = KPStateNumeric(
            3, 2, rng.uniform(0.5, 1.5, (2, 3)) * 1e160, rng.uniform(0.5, 1.5, (2, 3))
        )
        with pytest.raises(FloatingPointError):
            with np.errstate(over="ignore", invalid="ignore"):
                integrate(big, "first", 1.0, 3.0)

    def test_bad_step_parameters(self):
        s = KPStateNumeric.zero(3, 2)
        with pytest.raises(ValueError):
            integrate(s, "first", 0.0, 1.0)
        with pytest.raises(ValueError):
            integrate(s, "first", 1e-2, -1.0)

    def test_initial_q_values_match_exact_curve(self):
        from fractions import Fraction

        s = KPStateNumeric.random(3, 2, seed=12)
        res = integrate(s, "first", 1e-2, 0.0)
        curve = compute_curve(3, 2, "AB")
        values = {}
        for m in range(2):
            for n in range(3):
                values[gen_A(n, m)] = Fraction(s.A[m, n])
                values[gen_B(n, m)] = Fraction(s.B[m, n])
        for d in curve.degrees():
            evaluated = curve.q(d).evaluate(values)
            exact = float(
                evaluated.constant_value() if hasattr(evaluated, "terms") else evaluated
            )
            assert res.q_initial[d] == pytest.approx(exact, rel=1e-12)
