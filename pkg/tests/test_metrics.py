import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaoi import (
    SamplePath,
    UpdateSchedule,
    closed_form_aoi,
    cumulative_aoi,
    cumulative_gaoi_stationary,
    delay_double_sum,
    detection_delays,
    expected_cumulative_delay_stationary,
    filter_stale,
    gaoi_series_stationary,
    random_schedule,
    verify_proportionality,
)

H_06 = 0.9709505944546686


@st.composite
def schedules(draw, max_horizon=200):
    horizon = draw(st.integers(2, max_horizon))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(1, horizon - 1), st.integers(0, 40)).map(
                lambda sd: (sd[0], sd[0] + sd[1])
            ),
            max_size=15,
        )
    )
    return filter_stale(pairs, horizon)


def make_path(horizon, change_slots, x0=0):
    states = np.zeros(horizon, dtype=np.int64)
    dwells = np.zeros(horizon, dtype=np.int64)
    x, t = x0, 0
    for n in range(1, horizon + 1):
        if n in change_slots:
            x, t = 1 - x, 0
        else:
            t += 1
        states[n - 1] = x
        dwells[n - 1] = t
    return SamplePath(x0=x0, t0=0, states=states, dwells=dwells)


class TestCumulativeAoi:
    def test_single_update(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(5,))
        assert cumulative_aoi(sched) == 30
        assert closed_form_aoi(sched) == 30

    def test_no_updates_triangular(self):
        for t in (1, 2, 10, 57):
            sched = UpdateSchedule(horizon=t, samples=(), deliveries=())
            assert cumulative_aoi(sched) == t * (t - 1) // 2

    def test_instant_periodic(self):
        n, periods = 5, 4
        t = n * periods
        sched = UpdateSchedule(
            horizon=t,
            samples=tuple(range(n, t, n)),
            deliveries=tuple(range(n, t, n)),
        )
        assert cumulative_aoi(sched) == periods * n * (n - 1) // 2

    @given(schedules())
    @settings(max_examples=300, deadline=None)
    def test_closed_form_matches_summation_exactly(self, sched):
        assert cumulative_aoi(sched) == closed_form_aoi(sched)

    @given(schedules())
    @settings(max_examples=300, deadline=None)
    def test_double_sum_matches_closed_form_exactly(self, sched):
        assert delay_double_sum(sched) == closed_form_aoi(sched)

    @given(schedules(), st.integers(1, 199), st.integers(0, 40))
    @settings(max_examples=200, deadline=None)
    def test_adding_update_never_increases_aoi(self, sched, s, delay):
        if s >= sched.horizon:
            s = sched.horizon - 1
        d = min(s + delay, sched.horizon)
        pairs = list(zip(sched.samples, sched.deliveries)) + [(s, d)]
        extended = filter_stale(pairs, sched.horizon)
        assert cumulative_aoi(extended) <= cumulative_aoi(sched)

    def test_wide_integers_large_horizon(self):
        t = 10**6
        sched = UpdateSchedule(horizon=t, samples=(), deliveries=())
        assert closed_form_aoi(sched) == t * (t - 1) // 2


class TestDetectionDelays:
    def test_change_after_last_sample_capped(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(5,))
        path = make_path(10, {4})
        assert detection_delays(path, sched) == [(4, 6)]

    def test_change_before_sample(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(5,))
        path = make_path(10, {2})
        assert detection_delays(path, sched) == [(2, 3)]

    def test_change_at_sampling_slot_instant_delivery(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(3,))
        path = make_path(10, {3})
        assert detection_delays(path, sched) == [(3, 0)]

    def test_multiple_changes_detected_at_same_delivery(self):
        sched = UpdateSchedule(horizon=20, samples=(10,), deliveries=(12,))
        path = make_path(20, {2, 5, 7})
        assert detection_delays(path, sched) == [(2, 10), (5, 7), (7, 5)]

    def test_horizon_mismatch_rejected(self):
        sched = UpdateSchedule(horizon=10, samples=(), deliveries=())
        with pytest.raises(ValueError):
            detection_delays(make_path(9, set()), sched)


class TestExpectedDelayStationary:
    def test_p_one_equals_double_sum(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(5,))
        assert expected_cumulative_delay_stationary(sched, 1.0) == 30.0

    def test_p_zero(self, rng):
        assert expected_cumulative_delay_stationary(random_schedule(50, rng), 0.0) == 0.0

    @given(schedules(), st.floats(0.01, 1.0))
    @settings(max_examples=100, deadline=None)
    def test_proportional_to_closed_form(self, sched, p):
        assert expected_cumulative_delay_stationary(sched, p) == pytest.approx(
            p * closed_form_aoi(sched), rel=1e-12
        )


class TestGaoiStationary:
    def test_zero_rate_all_zero(self, rng):
        sched = random_schedule(50, rng)
        assert not gaoi_series_stationary(sched, 0.0).any()

    def test_cumulative_scaling(self):
        sched = UpdateSchedule(horizon=10, samples=(3,), deliveries=(5,))
        assert cumulative_gaoi_stationary(sched, H_06) == pytest.approx(30 * H_06, abs=1e-9)
        assert gaoi_series_stationary(sched, H_06).sum() == pytest.approx(30 * H_06, abs=1e-9)


class TestVerifyProportionality:
    def test_analytic_mode_exact(self, rng):
        p, rate = 0.6, H_06
        for _ in range(50):
            aoi = float(closed_form_aoi(random_schedule(150, rng)))
            report = verify_proportionality(rate * aoi, aoi, p * aoi, rate, p)
            assert report.rel_gap_delay < 1e-12
            assert report.rel_gap_gaoi < 1e-12
            assert not report.inconsistent

    def test_zero_rate_marks_gaoi_not_applicable(self):
        report = verify_proportionality(0.0, 100.0, 60.0, 0.0, 0.6)
        assert report.gaoi_scaled is None
        assert report.rel_gap_gaoi is None
        assert not report.inconsistent

    def test_zero_rate_nonzero_gaoi_flagged(self):
        report = verify_proportionality(5.0, 100.0, 60.0, 0.0, 0.6)
        assert report.inconsistent
