import numpy as np
import pytest

from wgms.equations import EquationSystem, initial_condition, kdv_system, nls_system, sge_system
from wgms.spectral import dft_forward, make_grid
from wgms.stepper import (
    ConvergenceError,
    DivergenceError,
    IterationStats,
    SolverSession,
    StepConfig,
    apply_H,
    build_multipliers,
)

BUILTINS = [kdv_system(1, 1), kdv_system(0.05, 1), nls_system(1, 1), nls_system(1, 2), sge_system()]


def linear_kdv():
    """KdV symbols with the nonlinearity switched off."""
    base = kdv_system(1, 1)
    return EquationSystem("linear", base.L, base.M, lambda u: np.zeros_like(u))


class TestMultipliers:
    @pytest.mark.parametrize("sys", BUILTINS, ids=lambda s: s.name)
    @pytest.mark.parametrize("dt", [1e-4, 1e-2, 0.37, 1.0, 10.0])
    def test_unit_modulus(self, sys, dt):
        g = make_grid(1024, 2 * np.pi)
        c = build_multipliers(sys, g, dt).c_hat
        assert np.max(np.abs(np.abs(c) - 1)) <= 1e-14

    @pytest.mark.parametrize("sys", BUILTINS, ids=lambda s: s.name)
    def test_mode_zero(self, sys):
        g = make_grid(16, 2 * np.pi)
        m = build_multipliers(sys, g, 0.1)
        assert np.all(m.c_hat[:, 0] == 1)
        for i, M in enumerate(sys.M):
            assert m.b_hat[i, 0] == 0.05 * M(0)

    def test_kdv_mode_one(self):
        g = make_grid(16, 2 * np.pi)
        m = build_multipliers(kdv_system(1, 1), g, 0.01)
        d = 0.005
        L = -(1j) ** 3  # L(i) = i
        assert L == 1j
        assert m.c_hat[0, 1] == pytest.approx((1 + d * 1j) / (1 - d * 1j), abs=1e-16)
        assert m.b_hat[0, 1] == pytest.approx(d * (-0.5j) / (1 - d * 1j), abs=1e-16)
        assert abs(m.c_hat[0, 1]) == pytest.approx(1, abs=1e-15)

    def test_nls_filter_closed_form(self):
        g = make_grid(64, 2 * np.pi)
        d = 0.05
        m = build_multipliers(nls_system(1, 1), g, 2 * d)
        k = g.wavenumbers
        np.testing.assert_allclose(np.abs(m.b_hat[0]), d / np.sqrt(1 + d ** 2 * k ** 4), rtol=1e-14)
        assert np.argmax(np.abs(m.b_hat[0])) == 0
        assert np.max(np.abs(m.b_hat)) == pytest.approx(d, rel=1e-15)

    def test_nyquist_zero_policy(self):
        g = make_grid(16, 2 * np.pi)
        for sys in (kdv_system(1, 1), sge_system()):
            paper = build_multipliers(sys, g, 0.1, "paper")
            zero = build_multipliers(sys, g, 0.1, "zero")
            assert np.all(zero.b_hat[:, 8] == 0) and np.all(zero.c_hat[:, 8] == 1)
            mask = np.arange(16) != 8
            np.testing.assert_array_equal(zero.c_hat[:, mask], paper.c_hat[:, mask])
        nls_zero = build_multipliers(nls_system(1, 1), g, 0.1, "zero")
        nls_paper = build_multipliers(nls_system(1, 1), g, 0.1, "paper")
        assert nls_zero.b_hat[0, 8] == 0 and nls_zero.c_hat[0, 8] == nls_paper.c_hat[0, 8]

    def test_nyquist_zero_keeps_kdv_real(self):
        g = make_grid(64, 20.0)
        u0 = initial_condition("kdv_gaussian", period=20.0)(g.sample_points)
        s = SolverSession(kdv_system(0.05, 1), g, u0, StepConfig(0.01, nyquist_policy="zero"))
        for _ in range(50):
            s.step()
        assert np.max(np.abs(s.state.imag)) < 1e-14

    def test_rejects_bad_input(self):
        g = make_grid(16, 1.0)
        with pytest.raises(ValueError):
            build_multipliers(kdv_system(1, 1), g, 0.0)
        with pytest.raises(ValueError):
            build_multipliers(kdv_system(1, 1), g, 0.1, "symmetric")


class TestApplyH:
    def _session(self, sys, u, dt=0.01, n=16, period=2 * np.pi):
        return SolverSession(sys, make_grid(n, period), u, StepConfig(dt))

    def _pre(self, s):
        return s.mult.c_hat * dft_forward(s.state, s.grid), s.sys.G(s.state)

    def test_zero(self):
        s = self._session(nls_system(1, 1), np.zeros(16))
        assert not np.any(apply_H(s, np.zeros((1, 16)), *self._pre(s)))

    def test_linear_single_mode(self):
        g = make_grid(16, 2 * np.pi)
        u = np.exp(1j * g.sample_points)
        s = self._session(linear_kdv(), u)
        c1 = build_multipliers(linear_kdv(), g, 0.01).c_hat[0, 1]
        rng = np.random.default_rng(0)
        for w in (np.zeros((1, 16)), rng.standard_normal((1, 16))):
            np.testing.assert_allclose(apply_H(s, w, *self._pre(s))[0], c1 * u, atol=1e-15)

    @pytest.mark.parametrize("nu, c", [(1.0, 0.5 - 0.25j), (2.0, 1.3), (0.7, 2j)])
    def test_nls_constant_field(self, nu, c):
        d = 0.005
        s = self._session(nls_system(1, nu), np.full(16, c))
        out = apply_H(s, np.full((1, 16), c), *self._pre(s))
        np.testing.assert_allclose(out, c + 2j * d * nu * abs(c) ** 2 * c, rtol=1e-14)

    def test_shape_mismatch(self):
        s = self._session(nls_system(1, 1), np.zeros(16))
        Cu, Gu = self._pre(s)
        with pytest.raises(ValueError):
            apply_H(s, np.zeros((1, 8)), Cu, Gu)


class TestStep:
    @pytest.mark.parametrize("sys", BUILTINS, ids=lambda s: s.name)
    @pytest.mark.parametrize("dt", [1e-3, 0.5, 10.0])
    def test_zero_state_stays_zero(self, sys, dt):
        g = make_grid(32, 2 * np.pi)
        s = SolverSession(sys, g, np.zeros((sys.n, 32)), StepConfig(dt))
        for _ in range(20):
            stats = s.step()
        assert np.all(s.state == 0)
        assert stats.deltas == [0.0, 0.0, 0.0]

    def test_linear_step_is_unitary(self):
        rng = np.random.default_rng(1)
        g = make_grid(128, 2 * np.pi)
        u0 = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        s = SolverSession(linear_kdv(), g, u0, StepConfig(0.05))
        n0 = np.linalg.norm(u0)
        for _ in range(10):
            s.step()
        assert abs(np.linalg.norm(s.state) - n0) / n0 < 1e-13

    def test_linear_steps_compose_to_power_of_cayley(self):
        rng = np.random.default_rng(2)
        g = make_grid(128, 2 * np.pi)
        u0 = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        s = SolverSession(linear_kdv(), g, u0, StepConfig(0.01))
        for _ in range(100):
            s.step()
        expected = s.mult.c_hat ** 100 * dft_forward(u0, g)
        got = dft_forward(s.state, g)
        assert np.max(np.abs(got - expected)) / np.max(np.abs(expected)) < 1e-12

    def test_kdv_mean_invariant(self):
        g = make_grid(512, 20.0)
        u0 = initial_condition("kdv_gaussian", period=20.0)(g.sample_points)
        s = SolverSession(kdv_system(0.05, 1), g, u0, StepConfig(0.01))
        m0 = dft_forward(u0, g)[0, 0]
        for _ in range(1000):
            s.step()
        assert abs(dft_forward(s.state, g)[0, 0] - m0) / abs(m0) < 1e-13

    def test_contraction_appendix_nls(self):
        g = make_grid(1024, 2 * np.pi)
        u0 = initial_condition("nls_sech", b=3, nu=2)(g.sample_points)
        s = SolverSession(nls_system(1, 2), g, u0, StepConfig(0.01, iterations=3))
        for _ in range(100):
            stats = s.step()
            assert len(stats.deltas) == 3 and stats.iterations == 3
            assert all(r < 1 for r in stats.ratios)

    def test_tolerance_mode_converges(self):
        g = make_grid(256, 40.0)
        u0 = initial_condition("nls_soliton", a=1, v=0, mu=1, nu=2)(g.sample_points)
        s = SolverSession(nls_system(1, 2), g, u0, StepConfig(1e-3, tolerance=1e-12))
        stats = s.step()
        assert stats.deltas[-1] <= 1e-12
        assert 1 < stats.iterations < 25

    def test_tolerance_mode_exhausted(self):
        g = make_grid(256, 40.0)
        u0 = initial_condition("nls_soliton", a=1, v=0, mu=1, nu=2)(g.sample_points)
        s = SolverSession(nls_system(1, 2), g, u0, StepConfig(0.05, tolerance=1e-15, max_iterations=2))
        with pytest.raises(ConvergenceError) as info:
            s.step()
        assert info.value.step_index == 1
        np.testing.assert_array_equal(s.state[0], u0[0])  # state untouched on failure

    def test_divergence_large_dt(self):
        g = make_grid(1024, 2 * np.pi)
        u0 = initial_condition("nls_sech", b=3, nu=2)(g.sample_points)
        s = SolverSession(nls_system(1, 2), g, u0, StepConfig(10.0))
        with pytest.raises(DivergenceError) as info:
            for _ in range(10):
                s.step()
        assert info.value.step_index is not None

    def test_bad_state(self):
        g = make_grid(16, 1.0)
        with pytest.raises(ValueError):
            SolverSession(nls_system(1, 1), g, np.zeros(8), StepConfig(0.1))
        with pytest.raises(ValueError):
            SolverSession(nls_system(1, 1), g, np.full(16, np.nan), StepConfig(0.1))

    @pytest.mark.parametrize("kwargs", [dict(dt=0), dict(dt=0.1, iterations=0),
                                        dict(dt=0.1, tolerance=-1.0), dict(dt=0.1, nyquist_policy="x")])
    def test_bad_config(self, kwargs):
        with pytest.raises(ValueError):
            StepConfig(**kwargs)


class TestIntegrate:
    def _kdv(self):
        g = make_grid(512, 20.0)
        u0 = initial_condition("kdv_gaussian", period=20.0)(g.sample_points)
        return SolverSession(kdv_system(0.05, 1), g, u0, StepConfig(0.01))

    def test_no_steps(self):
        s = self._kdv()
        u0 = s.state.copy()
        assert s.integrate(0.0) == []
        np.testing.assert_array_equal(s.state, u0)

    def test_reference_kdv_run(self):
        s = self._kdv()
        seen = []
        history = s.integrate(5.0, observer=seen.append, every=10)
        assert len(history) == 500 and s.step_count == 500
        assert len(seen) == 51 and seen[0].step == 0 and seen[-1].step == 500
        assert s.time == 5.0
        assert np.all(np.isfinite(s.state))

    def test_time_is_product_not_sum(self):
        s = SolverSession(sge_system(), make_grid(8, 1.0), np.zeros((2, 8)), StepConfig(0.1))
        for _ in range(1000):
            s.step()
        acc = 0.0
        for _ in range(1000):
            acc += 0.1
        assert s.time == 1000 * 0.1 and acc != s.time

    def test_end_time_within_half_step(self):
        s = SolverSession(sge_system(), make_grid(8, 1.0), np.zeros((2, 8)), StepConfig(0.3))
        s.integrate(1.0)
        assert s.step_count == 3 and abs(s.time - 1.0) <= 0.15
        s.integrate(1.2)
        assert s.step_count == 4

    def test_rejects_past_end(self):
        s = SolverSession(sge_system(), make_grid(8, 1.0), np.zeros((2, 8)), StepConfig(0.1))
        s.integrate(1.0)
        with pytest.raises(ValueError):
            s.integrate(0.5)

    def test_snapshots_are_immutable_copies(self):
        s = self._kdv()
        seen = []
        s.integrate(0.05, observer=seen.append)
        assert not np.array_equal(seen[0].state, seen[-1].state)
        with pytest.raises(ValueError):
            seen[0].state[0, 0] = 1

    def test_multipliers_rebuilt_on_dt_change(self):
        s = self._kdv()
        m = s.mult
        s.config = StepConfig(0.01)
        assert s.mult is m
        s.config = StepConfig(0.02)
        assert s.mult is not m and s.mult.d == 0.01


def test_iteration_stats_ratios():
    st = IterationStats([1.0, 0.5, 0.0, 0.0], 4)
    assert st.ratios == [0.5, 0.0]
    assert st.max_ratio == 0.5
    assert np.isnan(IterationStats().max_ratio)
