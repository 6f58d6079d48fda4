"""Two-state absorbing change-point model with a geometric change time.

The system starts in state 0 and jumps once to the absorbing state 1 at a
random slot theta with P[theta = k] = p (1-p)^{k-1}.  The chain is not
stationary, so age alone no longer measures staleness; the conditional
entropy of the unseen trajectory does, and it admits closed forms:

  h(a) = entropy of the change offset over an a-slot window
       = (1 - (1-p)^a) / p * H(p, 1-p),

with the recursion h(a+1) = h(a) + (1-p)^a h(1).  Residual uncertainty lives
entirely on the pre-change side: once state 1 is observed the future is
deterministic.  Over a horizon T, cumulative uncertainty is an affine
function of the expected detection delay with a schedule-independent
intercept C(T).
"""

from __future__ import annotations

from dataclasses import dataclass

from .markov import binary_entropy
from .schedule import UpdateSchedule


@dataclass(frozen=True)
class BayesModel:
    """Per-slot change hazard of the geometric change point."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"change hazard must lie in (0, 1), got {self.p}")

    @property
    def h1(self) -> float:
        """Single-slot uncertainty H(p, 1-p) in bits."""
        return binary_entropy(self.p)


def h_closed(model: BayesModel, x: int) -> float:
    """Uncertainty of an x-slot window starting from the pre-change state."""
    if x < 0:
        raise ValueError("window length must be non-negative")
    p = model.p
    return (1.0 - (1.0 - p) ** x) / p * model.h1


def bayes_gaoi(model: BayesModel, age: int, observed_state: int) -> float:
    """Staleness given the last delivered sample's state.

    Only the pre-change state leaves anything unresolved; from the absorbing
    state the trajectory is known exactly.
    """
    if observed_state not in (0, 1):
        raise ValueError("observed state must be 0 or 1")
    if observed_state == 1:
        return 0.0
    return h_closed(model, age)


def _expected_theta_capped(p: float, t: int) -> float:
    """sum_{k=1}^{T} k (1-p)^{k-1} p, the mean change time restricted to [1,T]."""
    return sum(k * (1.0 - p) ** (k - 1) * p for k in range(1, t + 1))


def bayes_cumulative_gaoi(model: BayesModel, schedule: UpdateSchedule, t: int | None = None) -> float:
    """Expected total staleness over [1, T] for a given schedule (bits).

    Averages the state-conditioned value over the change time: a sample taken
    at s_i still shows state 0 with probability (1-p)^{s_i}.
    """
    if t is None:
        t = schedule.horizon
    if t != schedule.horizon:
        raise ValueError("horizon must match the schedule")
    p = model.p
    s_cap = schedule.capped_samples()
    d_cap = schedule.capped_deliveries()
    acc = (1.0 - p) * ((1.0 - p) ** t - 1.0) / p
    for i in range(len(s_cap) - 1):
        acc += (d_cap[i + 1] - d_cap[i]) * (1.0 - p) ** s_cap[i]
    return model.h1 / p * acc


def bayes_expected_delay(model: BayesModel, schedule: UpdateSchedule, t: int | None = None) -> float:
    """Expected detection delay of the change, restricted to [1, T].

    A change at theta <= T is detected at the first delivery sampled at or
    after theta, capped at the horizon; changes after T contribute nothing.
    """
    if t is None:
        t = schedule.horizon
    if t != schedule.horizon:
        raise ValueError("horizon must match the schedule")
    p = model.p
    s_cap = schedule.capped_samples()
    d_cap = schedule.capped_deliveries()
    acc = -t * (1.0 - p) ** t - _expected_theta_capped(p, t)
    for i in range(len(s_cap) - 1):
        acc += (d_cap[i + 1] - d_cap[i]) * (1.0 - p) ** s_cap[i]
    return acc


def bayes_constant_c(model: BayesModel, t: int) -> float:
    """Schedule-independent residual between cumulative staleness (bits) and
    h(1)/p times the expected detection delay, for horizon T."""
    if t < 0:
        raise ValueError("horizon must be non-negative")
    p = model.p
    return model.h1 / p * (
        (1.0 - p) * ((1.0 - p) ** t - 1.0) / p
        + t * (1.0 - p) ** t
        + _expected_theta_capped(p, t)
    )
