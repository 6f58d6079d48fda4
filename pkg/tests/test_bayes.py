import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaoi import (
    BayesModel,
    UpdateSchedule,
    bayes_constant_c,
    bayes_cumulative_gaoi,
    bayes_expected_delay,
    bayes_gaoi,
    h_closed,
    random_schedule,
)
from gaoi.oracle import exact_bayes_delay, exact_bayes_gaoi


class TestHClosed:
    def test_one_slot_window_is_binary_entropy(self):
        assert h_closed(BayesModel(0.5), 1) == pytest.approx(1.0, abs=1e-12)

    def test_two_slot_window(self):
        # entropy of the truncated-geometric distribution {0.5, 0.25, 0.25}
        assert h_closed(BayesModel(0.5), 2) == pytest.approx(1.5, abs=1e-12)

    def test_empty_window(self):
        for p in (0.04, 0.3, 0.7):
            assert h_closed(BayesModel(p), 0) == 0.0

    @given(st.floats(0.01, 0.99), st.integers(0, 10_000))
    @settings(max_examples=200)
    def test_recursion(self, p, x):
        model = BayesModel(p)
        lhs = h_closed(model, x + 1) - h_closed(model, x)
        assert lhs == pytest.approx((1.0 - p) ** x * model.h1, abs=1e-12)


class TestBayesGaoi:
    def test_pre_change_state_uses_window_entropy(self):
        assert bayes_gaoi(BayesModel(0.5), 2, 0) == pytest.approx(1.5, abs=1e-9)

    def test_absorbing_state_no_uncertainty(self):
        for p in (0.04, 0.5, 0.9):
            for age in (0, 1, 7, 100):
                assert bayes_gaoi(BayesModel(p), age, 1) == 0.0

    def test_small_hazard_closed_form(self):
        # cross-checked against path enumeration below
        p = 0.04
        expected = (1 - 0.96**5) / 0.04 * BayesModel(p).h1
        assert bayes_gaoi(BayesModel(p), 5, 0) == pytest.approx(expected, abs=1e-12)
        assert exact_bayes_gaoi(BayesModel(p), 5) == pytest.approx(expected, abs=1e-12)

    @given(st.floats(0.01, 0.99), st.integers(0, 200))
    @settings(max_examples=200)
    def test_monotone_in_age_and_bounded(self, p, age):
        model = BayesModel(p)
        v0 = bayes_gaoi(model, age, 0)
        v1 = bayes_gaoi(model, age + 1, 0)
        assert v0 <= v1 + 1e-15
        assert v1 <= model.h1 / p + 1e-12


class TestCumulativeGaoi:
    def test_no_deliveries_small_horizon(self):
        # direct sum: ages 1 and 2 from the time-0 cap
        model = BayesModel(0.5)
        sched = UpdateSchedule(horizon=2, samples=(), deliveries=())
        direct = bayes_gaoi(model, 1, 0) + bayes_gaoi(model, 2, 0)
        assert bayes_cumulative_gaoi(model, sched) == pytest.approx(direct, abs=1e-12)
        assert direct == pytest.approx(2.5, abs=1e-12)

    def test_empty_horizon(self):
        sched = UpdateSchedule(horizon=0, samples=(), deliveries=())
        assert bayes_cumulative_gaoi(BayesModel(0.3), sched) == pytest.approx(0.0, abs=1e-12)

    def test_matches_per_slot_summation(self, rng):
        # oracle: sum bayes_gaoi(n - delta(n)) weighted by P[pre-change at delta(n)]
        # slot n belongs to (d_i, d_{i+1}]: a delivery informs the monitor
        # from the following slot onward in this accounting
        model = BayesModel(0.04)
        for _ in range(20):
            sched = random_schedule(100, rng)
            d_cap = sched.capped_deliveries()
            s_cap = sched.capped_samples()
            total = 0.0
            for n in range(1, 101):
                j = max(i for i in range(sched.num_updates + 1) if d_cap[i] < n)
                delta = s_cap[j]
                total += bayes_gaoi(model, n - delta, 0) * (1 - model.p) ** delta
            assert bayes_cumulative_gaoi(model, sched) == pytest.approx(total, abs=1e-9)


class TestExpectedDelay:
    def test_two_slot_no_deliveries(self):
        sched = UpdateSchedule(horizon=2, samples=(), deliveries=())
        assert bayes_expected_delay(BayesModel(0.5), sched) == pytest.approx(0.5, abs=1e-12)

    def test_sample_every_slot_instant_delivery(self):
        t = 30
        sched = UpdateSchedule(
            horizon=t, samples=tuple(range(1, t)), deliveries=tuple(range(1, t))
        )
        assert bayes_expected_delay(BayesModel(0.3), sched) == pytest.approx(0.0, abs=1e-12)

    def test_matches_enumeration(self, rng):
        model = BayesModel(0.04)
        for _ in range(50):
            sched = random_schedule(100, rng)
            assert bayes_expected_delay(model, sched) == pytest.approx(
                exact_bayes_delay(model, sched), abs=1e-12
            )


class TestAffineLaw:
    def test_worked_example(self):
        model = BayesModel(0.5)
        assert bayes_constant_c(model, 2) == pytest.approx(1.5, abs=1e-12)
        assert bayes_constant_c(model, 0) == 0.0

    def test_schedule_independence(self, rng):
        model = BayesModel(0.04)
        c100 = bayes_constant_c(model, 100)
        scale = model.h1 / model.p
        for _ in range(100):
            sched = random_schedule(100, rng)
            residual = bayes_cumulative_gaoi(model, sched) - scale * bayes_expected_delay(model, sched)
            assert residual == pytest.approx(c100, abs=1e-9)

    @given(st.floats(0.02, 0.98), st.integers(0, 60), st.data())
    @settings(max_examples=150, deadline=None)
    def test_affine_identity_property(self, p, horizon, data):
        model = BayesModel(p)
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        sched = random_schedule(horizon, rng)
        lhs = bayes_cumulative_gaoi(model, sched) - model.h1 / p * bayes_expected_delay(model, sched)
        assert lhs == pytest.approx(bayes_constant_c(model, horizon), abs=1e-9)
