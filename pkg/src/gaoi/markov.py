"""Joint (status, dwell) Markov chain: model validation, stationary
distribution, and entropy rate.

The monitored system holds a status ``x`` from a finite alphabet and a dwell
counter ``t`` counting slots spent in that status.  Each slot the status
changes with probability ``q_t(x)``; on a change the next status is drawn
from row ``x`` of the change matrix, and the counter resets to 0.

Dwell laws are stored as an explicit prefix ``q_0(x)..q_{m-1}(x)`` plus a
constant tail used for every dwell index >= m.  The tail must be positive so
a change eventually happens and the joint chain is recurrent; with that
representation all the infinite series below (normalization, entropy rate)
have closed-form tails and are summed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOL_STOCHASTIC = 1e-12


class ModelError(ValueError):
    """Raised for malformed kernels or non-irreducible change structure."""


class IrreducibilityError(ModelError):
    """Embedded change chain is not irreducible."""

    def __init__(self, unreachable: list[int]):
        self.unreachable = unreachable
        super().__init__(
            f"change chain is not irreducible; unreachable states: {unreachable}"
        )


@dataclass(frozen=True)
class ChangeKernel:
    """Row-stochastic matrix of next-status distributions given a change."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n_states(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class DwellKernel:
    """Per-state change probabilities: prefix q_0..q_{m-1} plus constant tail.

    ``prefix[x]`` may be ragged across states; internally rows are padded to a
    common length with the state's tail value, so ``q(x, i)`` is well defined
    for any i >= 0.
    """

    prefix: np.ndarray  # shape (n_states, m)
    tail: np.ndarray  # shape (n_states,)

    def __post_init__(self):
        prefix = np.atleast_2d(np.asarray(self.prefix, dtype=float))
        tail = np.asarray(self.tail, dtype=float)
        prefix.setflags(write=False)
        tail.setflags(write=False)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    @classmethod
    def from_lists(cls, prefixes: list[list[float]], tails: list[float]) -> "DwellKernel":
        """Build from possibly-ragged per-state prefixes (padded with tails)."""
        m = max((len(p) for p in prefixes), default=0)
        rows = [list(p) + [t] * (m - len(p)) for p, t in zip(prefixes, tails)]
        return cls(np.array(rows, dtype=float).reshape(len(tails), m), np.asarray(tails))

    @classmethod
    def homogeneous(cls, n_states: int, prefix: list[float], tail: float) -> "DwellKernel":
        return cls(np.tile(np.asarray(prefix, dtype=float), (n_states, 1)).reshape(n_states, -1),
                   np.full(n_states, float(tail)))

    @property
    def n_states(self) -> int:
        return self.tail.shape[0]

    @property
    def prefix_len(self) -> int:
        return self.prefix.shape[1]

    def q(self, x: int, i: int) -> float:
        """Change probability after i dwell slots in status x."""
        if i < self.prefix_len:
            return float(self.prefix[x, i])
        return float(self.tail[x])

    def is_homogeneous(self) -> bool:
        return bool(
            np.all(self.prefix == self.prefix[0:1, :]) and np.all(self.tail == self.tail[0])
        )


@dataclass(frozen=True)
class JointState:
    """Status index plus slots already spent in that status."""

    x: int
    t: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("dwell counter must be non-negative")


@dataclass(frozen=True)
class JointModel:
    """Validated pair of change and dwell kernels over a common alphabet."""

    change: ChangeKernel
    dwell: DwellKernel

    @property
    def alphabet_size(self) -> int:
        return self.change.n_states

    def survival(self, x: int, i: int) -> float:
        """P[dwell in status x reaches at least i slots] = prod_{j<i}(1-q_j(x))."""
        m = self.dwell.prefix_len
        head = float(np.prod(1.0 - self.dwell.prefix[x, : min(i, m)]))
        if i > m:
            head *= (1.0 - float(self.dwell.tail[x])) ** (i - m)
        return head

    def expected_dwell(self, x: int) -> float:
        """Mean number of slots per visit to status x (>= 1)."""
        m = self.dwell.prefix_len
        total = 0.0
        surv = 1.0
        for i in range(m):
            total += surv
            surv *= 1.0 - float(self.dwell.prefix[x, i])
        return total + surv / float(self.dwell.tail[x])


@dataclass(frozen=True)
class StationaryDistribution:
    """Truncated stationary law of the joint chain.

    ``mu[x]`` stores mu_{x,0..M_x}; ``state_tail_mass[x]`` is the exact mass
    of the geometric tail beyond the stored indices, so stored mass plus tail
    mass is exactly 1 (up to float rounding).
    """

    mu: tuple[np.ndarray, ...]
    state_tail_mass: np.ndarray
    embedded: np.ndarray = field(repr=False)  # stationary vector of the change chain

    @property
    def tail_mass(self) -> float:
        return float(self.state_tail_mass.sum())

    @property
    def mu0(self) -> np.ndarray:
        return np.array([m[0] for m in self.mu])

    def truncation_index(self, x: int) -> int:
        return len(self.mu[x]) - 1


def validate_model(change: ChangeKernel, dwell: DwellKernel) -> JointModel:
    """Check stochasticity and recurrence; return a usable model."""
    rows = change.rows
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise ModelError(f"change matrix must be square, got shape {rows.shape}")
    if dwell.n_states != rows.shape[0]:
        raise ModelError(
            f"dwell kernel covers {dwell.n_states} states, change matrix {rows.shape[0]}"
        )
    if np.any(rows < 0.0) or np.any(rows > 1.0):
        raise ModelError("change matrix entries must lie in [0, 1]")
    bad = np.abs(rows.sum(axis=1) - 1.0) > ATOL_STOCHASTIC
    if np.any(bad):
        raise ModelError(f"change matrix rows {np.flatnonzero(bad).tolist()} do not sum to 1")
    q_all = np.concatenate([dwell.prefix.ravel(), dwell.tail])
    if np.any(q_all < 0.0) or np.any(q_all > 1.0):
        raise ModelError("dwell probabilities must lie in [0, 1]")
    if np.any(dwell.tail <= 0.0):
        zero = np.flatnonzero(dwell.tail <= 0.0).tolist()
        raise ModelError(
            f"dwell tail must be positive (states {zero} would never change again)"
        )
    return JointModel(change=change, dwell=dwell)


def _strongly_connected(rows: np.ndarray) -> list[int]:
    """Return states not in the strongly connected component of state 0."""
    n = rows.shape[0]
    adj = rows > 0.0

    def reach(adj_mat):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(adj_mat[v]):
                if w not in seen:
                    seen.add(int(w))
                    stack.append(int(w))
        return seen

    fwd = reach(adj)
    bwd = reach(adj.T)
    return sorted(set(range(n)) - (fwd & bwd))


def embedded_stationary(model: JointModel) -> np.ndarray:
    """Stationary vector of the change matrix (status seen at change slots)."""
    rows = model.change.rows
    missing = _strongly_connected(rows)
    if missing:
        raise IrreducibilityError(missing)
    n = rows.shape[0]
    # solve pi (P - I) = 0 with sum(pi) = 1 as an overdetermined system
    a = np.vstack([rows.T - np.eye(n), np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def stationary_distribution(model: JointModel, tail_tol: float = 1e-12) -> StationaryDistribution:
    """Stationary law mu_{x,i} of the joint chain.

    Solves the embedded change chain for mu_{x,0} (the per-slot change mass
    factors through the change matrix alone), then fills dwell levels with the
    survival products mu_{x,i} = mu_{x,0} * prod_{j<i}(1-q_j(x)).  Each
    state's dwell axis is truncated once the remaining (geometric) mass drops
    below ``tail_tol`` / alphabet; that remainder is recorded, not dropped.
    """
    pi = embedded_stationary(model)
    n = model.alphabet_size
    mean_dwell = np.array([model.expected_dwell(x) for x in range(n)])
    mu0 = pi / float(pi @ mean_dwell)

    per_state_tol = tail_tol / n
    mu = []
    tail_mass = np.zeros(n)
    m = model.dwell.prefix_len
    for x in range(n):
        qt = float(model.dwell.tail[x])
        levels = [mu0[x]]
        surv = 1.0
        i = 0
        while True:
            surv *= 1.0 - model.dwell.q(x, i)
            i += 1
            # remaining mass at indices >= i, summed in closed form once the
            # constant tail applies
            if i >= m:
                remaining = mu0[x] * surv / qt
            else:
                remaining = mu0[x] * (
                    sum(model.survival(x, j) for j in range(i, m))
                    + model.survival(x, m) / qt
                )
            if remaining < per_state_tol or surv == 0.0:
                tail_mass[x] = remaining
                break
            levels.append(mu0[x] * surv)
        arr = np.array(levels)
        arr.setflags(write=False)
        mu.append(arr)
    return StationaryDistribution(mu=tuple(mu), state_tail_mass=tail_mass, embedded=pi)


def prob_change(dist: StationaryDistribution) -> float:
    """Per-slot probability that the status just changed, P[T_n = 0]."""
    return float(dist.mu0.sum())


def discrete_entropy(pi: np.ndarray) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    pi = np.asarray(pi, dtype=float)
    if np.any(pi < 0.0):
        raise ValueError("probabilities must be non-negative")
    if abs(pi.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {pi.sum()}, expected 1")
    pos = pi[pi > 0.0]
    return float(-(pos * np.log2(pos)).sum())


def binary_entropy(q: float) -> float:
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)


@dataclass(frozen=True)
class EntropyRate:
    """Entropy rate in bits/slot plus a bound on the truncation error."""

    bits: float
    truncation_bound: float


def _dwell_entropy_series(model: JointModel, x: int, h_change: float) -> float:
    """sum_i prod_{j<i}(1-q_j(x)) [H(q_i(x)) + q_i(x) * h_change], exactly.

    The constant dwell tail turns the series remainder into a geometric sum.
    """
    m = model.dwell.prefix_len
    total = 0.0
    surv = 1.0
    for i in range(m):
        q = model.dwell.q(x, i)
        total += surv * (binary_entropy(q) + q * h_change)
        surv *= 1.0 - q
    qt = float(model.dwell.tail[x])
    total += surv / qt * (binary_entropy(qt) + qt * h_change)
    return total


def entropy_rate(model: JointModel, dist: StationaryDistribution) -> EntropyRate:
    """Entropy rate of the joint chain in bits/slot.

    Evaluates the change-weighted dwell series per status; the reported bound
    covers the stationary-distribution truncation (the series tail itself is
    summed in closed form, so the bound is conservative).
    """
    mu0 = dist.mu0
    rate = 0.0
    for x in range(model.alphabet_size):
        h_px = discrete_entropy(model.change.rows[x])
        rate += mu0[x] * _dwell_entropy_series(model, x, h_px)
    span = max(len(m) for m in dist.mu)
    bound = dist.tail_mass * np.log2(max(2, model.alphabet_size * span))
    return EntropyRate(bits=float(rate), truncation_bound=float(bound))


def entropy_rate_homogeneous(model: JointModel, dist: StationaryDistribution) -> EntropyRate:
    """Entropy rate via the split H(dwell chain) + H(change chain) * P[T_n=0].

    Only valid when every status shares the same dwell law.
    """
    if not model.dwell.is_homogeneous():
        raise ModelError("dwell kernel differs across states; split formula does not apply")
    mean_dwell = model.expected_dwell(0)
    # entropy rate of the dwell counter chain alone
    h_dwell = _dwell_entropy_series(model, 0, 0.0) / mean_dwell
    h_change = float(
        sum(dist.embedded[x] * discrete_entropy(model.change.rows[x])
            for x in range(model.alphabet_size))
    )
    rate = h_dwell + h_change * prob_change(dist)
    span = max(len(m) for m in dist.mu)
    bound = dist.tail_mass * np.log2(max(2, model.alphabet_size * span))
    return EntropyRate(bits=float(rate), truncation_bound=float(bound))


def joint_step(model: JointModel, u: JointState, rng: np.random.Generator) -> JointState:
    """Advance the joint chain one slot using draws from ``rng``."""
    q = model.dwell.q(u.x, u.t)
    if rng.random() < q:
        x_new = int(rng.choice(model.alphabet_size, p=model.change.rows[u.x]))
        return JointState(x=x_new, t=0)
    return JointState(x=u.x, t=u.t + 1)
