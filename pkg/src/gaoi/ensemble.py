"""Deterministic Monte Carlo ensembles over (path, schedule) pairs.

Every path gets its own random stream derived from (base_seed, path index,
salt); schedules use a different salt than paths, so the realized schedule
never depends on the state process (the policies are state-independent by
construction).  Aggregation is order-insensitive, so results are bit-identical
for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bayes as bayes_mod
from .markov import (
    JointModel,
    JointState,
    StationaryDistribution,
    entropy_rate,
    joint_step,
    prob_change,
    stationary_distribution,
)
from .metrics import RunSummary, SamplePath, cumulative_aoi, detection_delays
from .schedule import PolicySpec, UpdateSchedule, aoi_series, generate_schedule

PATH_SALT = 0
POLICY_SALT = 1
INIT_SALT = 2

METRICS = ("cum_aoi", "cum_gaoi", "cum_delay", "num_changes")


@dataclass(frozen=True)
class EnsembleConfig:
    model: JointModel | bayes_mod.BayesModel
    policy: PolicySpec
    horizon: int
    num_paths: int
    base_seed: int

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.num_paths < 1:
            raise ValueError("need at least one path")


@dataclass(frozen=True)
class EnsembleStats:
    """Ensemble means with standard errors, plus per-slot average series."""

    num_paths: int
    horizon: int
    mean: dict[str, float]
    se: dict[str, float]
    mean_aoi_series: np.ndarray
    mean_gaoi_series: np.ndarray


def derive_stream(base_seed: int, path_index: int, salt: int) -> np.random.Generator:
    """Independent, reproducible stream for (seed, path, salt).

    The seed sequence hashes its entropy and spawn key through a counter-based
    mixer, so distinct (path, salt) pairs give statistically independent
    streams and identical inputs always reproduce the same draws.
    """
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(path_index, salt))
    return np.random.Generator(np.random.PCG64(seq))


def simulate_path(model: JointModel, u0: JointState, horizon: int,
                  rng: np.random.Generator) -> SamplePath:
    """Roll the joint chain forward over slots 1..horizon."""
    states = np.empty(horizon, dtype=np.int64)
    dwells = np.empty(horizon, dtype=np.int64)
    u = u0
    for n in range(horizon):
        u = joint_step(model, u, rng)
        states[n] = u.x
        dwells[n] = u.t
    return SamplePath(x0=u0.x, t0=u0.t, states=states, dwells=dwells)


def draw_stationary_state(dist: StationaryDistribution, rng: np.random.Generator) -> JointState:
    """Sample an initial (x, t) from the truncated stationary law.

    The tiny tail mass is folded into each state's last stored level.
    """
    weights = np.concatenate([m.copy() for m in dist.mu])
    offsets = np.cumsum([0] + [len(m) for m in dist.mu])
    for x in range(len(dist.mu)):
        weights[offsets[x + 1] - 1] += dist.state_tail_mass[x]
    idx = int(rng.choice(len(weights), p=weights / weights.sum()))
    x = int(np.searchsorted(offsets, idx, side="right") - 1)
    return JointState(x=x, t=idx - int(offsets[x]))


def _stationary_path_summary(
    model: JointModel,
    dist: StationaryDistribution,
    rate: float,
    policy: PolicySpec,
    horizon: int,
    base_seed: int,
    k: int,
) -> tuple[RunSummary, UpdateSchedule]:
    schedule = generate_schedule(policy, horizon, derive_stream(base_seed, k, POLICY_SALT))
    u0 = draw_stationary_state(dist, derive_stream(base_seed, k, INIT_SALT))
    path = simulate_path(model, u0, horizon, derive_stream(base_seed, k, PATH_SALT))
    delays = detection_delays(path, schedule)
    cum_aoi = cumulative_aoi(schedule)
    return (
        RunSummary(
            cum_aoi=cum_aoi,
            cum_gaoi=rate * cum_aoi,
            cum_delay=sum(d for _, d in delays),
            num_changes=len(delays),
        ),
        schedule,
    )


def _bayes_path_summary(
    model: bayes_mod.BayesModel,
    policy: PolicySpec,
    horizon: int,
    base_seed: int,
    k: int,
) -> tuple[RunSummary, UpdateSchedule]:
    schedule = generate_schedule(policy, horizon, derive_stream(base_seed, k, POLICY_SALT))
    rng = derive_stream(base_seed, k, PATH_SALT)
    theta = int(rng.geometric(model.p))
    if theta <= horizon:
        cum_delay = schedule.delivery_for_change(theta) - theta
        num_changes = 1
    else:
        cum_delay = 0
        num_changes = 0
    return (
        RunSummary(
            cum_aoi=cumulative_aoi(schedule),
            # staleness is an expectation over paths; evaluate it analytically
            # per schedule, the path realization drives the delay only
            cum_gaoi=bayes_mod.bayes_cumulative_gaoi(model, schedule),
            cum_delay=cum_delay,
            num_changes=num_changes,
        ),
        schedule,
    )


def _bayes_gaoi_series(model: bayes_mod.BayesModel, schedule: UpdateSchedule) -> np.ndarray:
    """Expected staleness h(age) * P[last sample pre-change], slot by slot.

    Row n holds the value for slot n+1 under the (d_i, d_{i+1}] grouping (a
    delivery informs the monitor from the next slot onward), so the series
    sums exactly to the cumulative closed form over [1, T].
    """
    ages = aoi_series(schedule)
    delta = np.arange(schedule.horizon) - ages  # sampling time of freshest delivery
    return np.array([
        bayes_mod.h_closed(model, int(a) + 1) * (1.0 - model.p) ** int(d)
        for a, d in zip(ages, delta)
    ])


def run_ensemble(config: EnsembleConfig, workers: int = 1) -> EnsembleStats:
    """Simulate ``num_paths`` independent (path, schedule) pairs and aggregate.

    Output depends only on the config; worker count and completion order do
    not affect it.
    """
    if isinstance(config.model, bayes_mod.BayesModel):
        def one(k: int):
            return _bayes_path_summary(
                config.model, config.policy, config.horizon, config.base_seed, k
            )

        rate = None
    else:
        dist = stationary_distribution(config.model)
        rate = entropy_rate(config.model, dist).bits

        def one(k: int):
            return _stationary_path_summary(
                config.model, dist, rate, config.policy,
                config.horizon, config.base_seed, k,
            )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(config.num_paths)))
    else:
        results = [one(k) for k in range(config.num_paths)]

    values = {
        name: np.array([getattr(summary, name) for summary, _ in results], dtype=float)
        for name in METRICS
    }
    mean = {name: float(v.mean()) for name, v in values.items()}
    se = {
        name: float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0
        for name, v in values.items()
    }

    aoi_acc = np.zeros(config.horizon)
    gaoi_acc = np.zeros(config.horizon)
    for summary, schedule in results:
        ages = aoi_series(schedule)
        aoi_acc += ages
        if isinstance(config.model, bayes_mod.BayesModel):
            gaoi_acc += _bayes_gaoi_series(config.model, schedule)
        else:
            gaoi_acc += ages * rate
    return EnsembleStats(
        num_paths=config.num_paths,
        horizon=config.horizon,
        mean=mean,
        se=se,
        mean_aoi_series=aoi_acc / config.num_paths,
        mean_gaoi_series=gaoi_acc / config.num_paths,
    )
