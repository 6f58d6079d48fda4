"""Run configuration: YAML parsing (fail-closed) and the built-in presets."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .bayes import BayesModel
from .markov import ChangeKernel, DwellKernel, JointModel, validate_model
from .schedule import DelayLaw, PolicySpec


class ConfigError(ValueError):
    """Malformed or unknown configuration content."""


@dataclass(frozen=True)
class RunConfig:
    model: JointModel | BayesModel
    policies: tuple[PolicySpec, ...]
    horizon: int
    num_paths: int
    base_seed: int

    @property
    def is_bayesian(self) -> bool:
        return isinstance(self.model, BayesModel)


def _require_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _parse_dwell(raw, n_states: int) -> DwellKernel:
    if isinstance(raw, (int, float)):
        return DwellKernel.homogeneous(n_states, [], float(raw))
    if isinstance(raw, dict):
        _require_keys(raw, {"prefix", "tail"}, "model.dwell")
        return DwellKernel.homogeneous(
            n_states, [float(v) for v in raw.get("prefix", [])], float(raw["tail"])
        )
    if isinstance(raw, list):
        if len(raw) != n_states:
            raise ConfigError(f"need one dwell entry per state ({n_states}), got {len(raw)}")
        prefixes, tails = [], []
        for i, entry in enumerate(raw):
            _require_keys(entry, {"prefix", "tail"}, f"model.dwell[{i}]")
            prefixes.append([float(v) for v in entry.get("prefix", [])])
            tails.append(float(entry["tail"]))
        return DwellKernel.from_lists(prefixes, tails)
    raise ConfigError("model.dwell must be a probability, a {prefix, tail} map, or a per-state list")


def _parse_model(section: dict):
    _require_keys(section, {"kind", "alphabet_size", "px_rows", "dwell", "bayes_p"}, "model")
    kind = section.get("kind")
    if kind == "bayesian":
        if "bayes_p" not in section:
            raise ConfigError("bayesian model needs bayes_p")
        for k in ("alphabet_size", "px_rows", "dwell"):
            if k in section:
                raise ConfigError(f"model.{k} does not apply to a bayesian model")
        return BayesModel(p=float(section["bayes_p"]))
    if kind != "stationary":
        raise ConfigError(f"model.kind must be 'stationary' or 'bayesian', got {kind!r}")
    if "bayes_p" in section:
        raise ConfigError("model.bayes_p does not apply to a stationary model")
    try:
        rows = np.array(section["px_rows"], dtype=float)
    except KeyError:
        raise ConfigError("stationary model needs px_rows") from None
    n = int(section.get("alphabet_size", rows.shape[0]))
    if rows.shape != (n, n):
        raise ConfigError(f"px_rows has shape {rows.shape}, expected ({n}, {n})")
    if "dwell" not in section:
        raise ConfigError("stationary model needs dwell")
    return validate_model(ChangeKernel(rows), _parse_dwell(section["dwell"], n))


def _parse_delay(raw) -> DelayLaw:
    if raw is None:
        return DelayLaw.deterministic(0)
    _require_keys(raw, {"deterministic", "uniform"}, "policy.delay")
    if len(raw) != 1:
        raise ConfigError("policy.delay takes exactly one of 'deterministic' or 'uniform'")
    if "deterministic" in raw:
        return DelayLaw.deterministic(int(raw["deterministic"]))
    lo, hi = raw["uniform"]
    return DelayLaw.uniform(int(lo), int(hi))


def read_explicit_pairs(path: str | Path) -> tuple[tuple[int, int], ...]:
    """Parse a two-column 's d' text file into (sample, delivery) pairs."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigError(f"{path}:{lineno}: expected 's d', got {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return tuple(pairs)


def _parse_policy(section: dict, idx: int | None = None) -> PolicySpec:
    where = "policy" if idx is None else f"policies[{idx}]"
    _require_keys(section, {"kind", "period", "delay", "schedule_path"}, where)
    kind = section.get("kind")
    if kind == "explicit":
        if "schedule_path" not in section:
            raise ConfigError(f"{where}: explicit policy needs schedule_path")
        return PolicySpec(kind="explicit", pairs=read_explicit_pairs(section["schedule_path"]))
    if kind == "periodic":
        if "period" not in section:
            raise ConfigError(f"{where}: periodic policy needs period")
        return PolicySpec(kind="periodic", period=int(section["period"]),
                          delay=_parse_delay(section.get("delay")))
    if kind == "greedy":
        return PolicySpec(kind="greedy", delay=_parse_delay(section.get("delay")))
    raise ConfigError(f"{where}: unknown policy kind {kind!r}")


def parse_config(data: dict) -> RunConfig:
    """Validate a config mapping; unknown keys anywhere are errors."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    _require_keys(data, {"model", "policy", "policies", "run"}, "config")
    if "model" not in data:
        raise ConfigError("missing config section 'model'")
    if "policy" in data and "policies" in data:
        raise ConfigError("config takes at most one of 'policy' or 'policies'")
    model = _parse_model(data["model"])
    if "policy" in data:
        policies = (_parse_policy(data["policy"]),)
    elif "policies" in data:
        policies = tuple(_parse_policy(p, i) for i, p in enumerate(data["policies"]))
    else:
        policies = ()  # enough for entropy-rate; simulate/verify demand one
    run = data.get("run", {})
    _require_keys(run, {"horizon", "num_paths", "base_seed"}, "run")
    return RunConfig(
        model=model,
        policies=policies,
        horizon=int(run.get("horizon", 1)),
        num_paths=int(run.get("num_paths", 1)),
        base_seed=int(run.get("base_seed", 0)),
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return parse_config(data)


# Simulation presets for the two reference experiments: a symmetric two-state
# chain with change probability 0.6 (periodic sampling with instant delivery
# vs greedy sampling with uniform [20, 80] delivery delays), and the
# Bayesian change-point model with hazard 0.04 over 100 slots (period 5 vs
# greedy with uniform [2, 8] delays).
PRESETS: dict[str, dict] = {
    "fig5": {
        "model": {
            "kind": "stationary",
            "alphabet_size": 2,
            "px_rows": [[0.0, 1.0], [1.0, 0.0]],
            "dwell": 0.6,
        },
        "policies": [
            {"kind": "periodic", "period": 50, "delay": {"deterministic": 0}},
            {"kind": "greedy", "delay": {"uniform": [20, 80]}},
        ],
        "run": {"horizon": 1000, "num_paths": 1000, "base_seed": 20240101},
    },
    "fig6": {
        "model": {"kind": "bayesian", "bayes_p": 0.04},
        "policies": [
            {"kind": "periodic", "period": 5, "delay": {"deterministic": 0}},
            {"kind": "greedy", "delay": {"uniform": [2, 8]}},
        ],
        "run": {"horizon": 100, "num_paths": 2000, "base_seed": 20240102},
    },
}


def preset_config(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return parse_config(PRESETS[name])
