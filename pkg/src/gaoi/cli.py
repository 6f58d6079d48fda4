"""Command-line front end.

Subcommands:

* ``entropy-rate``: print the entropy rate, per-slot change probability, and
  truncation bound of a stationary model.
* ``simulate``: run the configured ensemble and write ``series.csv`` /
  ``summary.csv`` to the output directory (deterministic for a fixed seed).
* ``verify``: check the stationary proportionality law (``thm1``) or the
  Bayesian affine law (``thm2``), both analytically and by Monte Carlo.

Exit codes: 0 success, 1 verification failure, 2 config error, 3 model
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .bayes import BayesModel, bayes_constant_c, bayes_cumulative_gaoi, bayes_expected_delay
from .config import ConfigError, RunConfig, load_config, preset_config
from .ensemble import EnsembleConfig, EnsembleStats, derive_stream, run_ensemble
from .markov import IrreducibilityError, ModelError, entropy_rate, prob_change, stationary_distribution
from .metrics import closed_form_aoi, cumulative_aoi, delay_double_sum, verify_proportionality
from .schedule import DelayLaw, PolicySpec, generate_schedule, random_schedule

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_IO = 4

SUMMARY_COLUMNS = [
    "policy", "num_paths", "horizon", "p_change", "entropy_rate",
    "mean_cum_aoi", "se_cum_aoi", "mean_cum_delay", "se_cum_delay",
    "mean_cum_gaoi", "scaled_aoi", "residual",
]
SERIES_COLUMNS = ["n", "mean_aoi", "mean_gaoi", "mean_cum_aoi", "mean_cum_gaoi"]


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _load(args) -> RunConfig:
    if args.preset:
        cfg = preset_config(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("either --config or --preset is required")
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if getattr(args, "paths", None) is not None:
        overrides["num_paths"] = args.paths
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    return cfg


def _policy_label(policy: PolicySpec) -> str:
    if policy.kind == "periodic":
        return f"periodic{policy.period}"
    return policy.kind


def _summary_row(cfg: RunConfig, policy: PolicySpec, stats: EnsembleStats) -> dict:
    row = {c: "" for c in SUMMARY_COLUMNS}
    row.update(
        policy=_policy_label(policy),
        num_paths=stats.num_paths,
        horizon=stats.horizon,
        mean_cum_aoi=stats.mean["cum_aoi"],
        se_cum_aoi=stats.se["cum_aoi"],
        mean_cum_delay=stats.mean["cum_delay"],
        se_cum_delay=stats.se["cum_delay"],
        mean_cum_gaoi=stats.mean["cum_gaoi"],
    )
    if cfg.is_bayesian:
        model: BayesModel = cfg.model
        row["residual"] = float(
            stats.mean["cum_gaoi"] - model.h1 / model.p * stats.mean["cum_delay"]
        )
    else:
        dist = stationary_distribution(cfg.model)
        p = prob_change(dist)
        row["p_change"] = p
        row["entropy_rate"] = entropy_rate(cfg.model, dist).bits
        row["scaled_aoi"] = p * stats.mean["cum_aoi"]
    return row


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])


def _series_rows(stats: EnsembleStats) -> list[dict]:
    rows = []
    cum_aoi = 0.0
    cum_gaoi = 0.0
    for n in range(stats.horizon):
        cum_aoi += float(stats.mean_aoi_series[n])
        cum_gaoi += float(stats.mean_gaoi_series[n])
        rows.append({
            "n": n,
            "mean_aoi": float(stats.mean_aoi_series[n]),
            "mean_gaoi": float(stats.mean_gaoi_series[n]),
            "mean_cum_aoi": cum_aoi,
            "mean_cum_gaoi": cum_gaoi,
        })
    return rows


def cmd_entropy_rate(args) -> int:
    cfg = _load(args)
    if cfg.is_bayesian:
        raise ConfigError("entropy-rate needs a stationary model")
    dist = stationary_distribution(cfg.model)
    rate = entropy_rate(cfg.model, dist)
    p = prob_change(dist)
    print(f"entropy_rate_bits_per_slot: {rate.bits!r}")
    print(f"p_change: {p!r}")
    print(f"truncation_bound: {rate.truncation_bound!r}")
    row = {c: "" for c in SUMMARY_COLUMNS}
    row.update(policy="", num_paths=0, horizon=cfg.horizon, p_change=p,
               entropy_rate=rate.bits)
    print(",".join(SUMMARY_COLUMNS))
    print(",".join(_fmt(row[c]) for c in SUMMARY_COLUMNS))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    if not cfg.policies:
        raise ConfigError("simulate needs a 'policy' or 'policies' section")
    out = Path(args.out or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    summary_rows = []
    for i, policy in enumerate(cfg.policies):
        stats = run_ensemble(
            EnsembleConfig(model=cfg.model, policy=policy, horizon=cfg.horizon,
                           num_paths=cfg.num_paths, base_seed=cfg.base_seed),
            workers=args.workers,
        )
        summary_rows.append(_summary_row(cfg, policy, stats))
        series = _series_rows(stats)
        if i == 0:
            _write_csv(out / "series.csv", SERIES_COLUMNS, series)
        if len(cfg.policies) > 1:
            _write_csv(out / f"series_{_policy_label(policy)}.csv", SERIES_COLUMNS, series)
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)
    for row in summary_rows:
        print(",".join(f"{c}={_fmt(row[c])}" for c in SUMMARY_COLUMNS if row[c] != ""))
    return EXIT_OK


def _verify_thm1(cfg: RunConfig, workers: int) -> int:
    dist = stationary_distribution(cfg.model)
    rate = entropy_rate(cfg.model, dist).bits
    p = prob_change(dist)
    # analytic check: the three scaled quantities coincide on arbitrary schedules
    rng = derive_stream(cfg.base_seed, 0, 99)
    worst = 0.0
    for _ in range(100):
        sched = random_schedule(int(rng.integers(2, 201)), rng)
        aoi = cumulative_aoi(sched)
        if aoi != closed_form_aoi(sched) or aoi != delay_double_sum(sched):
            print("FAIL: integer schedule identity violated")
            return EXIT_VERIFY_FAILED
        report = verify_proportionality(rate * aoi, float(aoi), p * aoi, rate, p)
        gaps = [report.rel_gap_delay]
        if report.rel_gap_gaoi is not None:
            gaps.append(report.rel_gap_gaoi)
        worst = max(worst, *gaps)
    analytic_ok = worst < 1e-9
    print(f"analytic: max relative deviation {worst:.3e} "
          f"({'ok' if analytic_ok else 'FAIL'})")
    # Monte Carlo check per policy
    mc_ok = True
    for policy in cfg.policies:
        stats = run_ensemble(
            EnsembleConfig(model=cfg.model, policy=policy, horizon=cfg.horizon,
                           num_paths=cfg.num_paths, base_seed=cfg.base_seed),
            workers=workers,
        )
        report = verify_proportionality(
            stats.mean["cum_gaoi"], stats.mean["cum_aoi"], stats.mean["cum_delay"],
            rate, p, stats.se["cum_aoi"], stats.se["cum_delay"],
        )
        if report.inconsistent:
            print(f"{_policy_label(policy)}: FAIL (zero rate with nonzero GAoI)")
            mc_ok = False
            continue
        gaoi_str = ("n/a (zero entropy rate)" if report.gaoi_scaled is None
                    else repr(report.gaoi_scaled))
        ok = report.rel_gap_delay <= 0.02 and (
            report.rel_gap_gaoi is None or report.rel_gap_gaoi <= 1e-9
        )
        mc_ok = mc_ok and ok
        print(f"{_policy_label(policy)}: gaoi/rate={gaoi_str} aoi={report.aoi!r} "
              f"delay/p={report.delay_scaled!r} rel_gap={report.rel_gap_delay:.4f} "
              f"({'ok' if ok else 'FAIL'})")
    return EXIT_OK if analytic_ok and mc_ok else EXIT_VERIFY_FAILED


def _verify_thm2(cfg: RunConfig, workers: int) -> int:
    model: BayesModel = cfg.model
    t = cfg.horizon
    c_t = float(bayes_constant_c(model, t))
    scale = model.h1 / model.p
    rng = derive_stream(cfg.base_seed, 0, 98)
    schedules = [random_schedule(t, rng) for _ in range(100)]
    for policy in cfg.policies:
        # deterministic-delay variant of each configured policy (midpoint delay)
        mid = (policy.delay.lo + policy.delay.hi) // 2
        det = PolicySpec(kind=policy.kind, period=policy.period,
                         delay=DelayLaw.deterministic(mid), pairs=policy.pairs)
        schedules.append(generate_schedule(det, t, rng))
    worst = max(
        abs(bayes_cumulative_gaoi(model, s) - scale * bayes_expected_delay(model, s) - c_t)
        for s in schedules
    )
    analytic_ok = worst < 1e-9
    print(f"C(T)={c_t!r}")
    print(f"analytic: max |residual - C(T)| = {worst:.3e} "
          f"({'ok' if analytic_ok else 'FAIL'})")
    residuals = []
    mc_ok = True
    for policy in cfg.policies:
        stats = run_ensemble(
            EnsembleConfig(model=model, policy=policy, horizon=t,
                           num_paths=cfg.num_paths, base_seed=cfg.base_seed),
            workers=workers,
        )
        res = float(stats.mean["cum_gaoi"] - scale * stats.mean["cum_delay"])
        se = float(scale * stats.se["cum_delay"])
        ok = abs(res - c_t) <= 3.0 * se
        mc_ok = mc_ok and ok
        residuals.append((res, se))
        print(f"{_policy_label(policy)}: residual={res!r} se={se!r} "
              f"({'ok' if ok else 'FAIL'})")
    if len(residuals) >= 2:
        (r1, e1), (r2, e2) = residuals[:2]
        combined = (e1**2 + e2**2) ** 0.5
        ok = abs(r1 - r2) <= 3.0 * combined
        mc_ok = mc_ok and ok
        print(f"policy residual gap {abs(r1 - r2)!r} vs 3*combined_se "
              f"{3.0 * combined!r} ({'ok' if ok else 'FAIL'})")
    return EXIT_OK if analytic_ok and mc_ok else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    cfg = _load(args)
    if not cfg.policies:
        raise ConfigError("verify needs a 'policy' or 'policies' section")
    if args.theorem == "thm1":
        if cfg.is_bayesian:
            raise ConfigError("thm1 needs a stationary model")
        return _verify_thm1(cfg, args.workers)
    if not cfg.is_bayesian:
        raise ConfigError("thm2 needs a bayesian model")
    return _verify_thm2(cfg, args.workers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaoi",
                                     description="Status-update freshness simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML config path")
        p.add_argument("--preset", help="built-in preset name (fig5, fig6)")
        p.add_argument("--seed", type=int, help="override run.base_seed")
        p.add_argument("--paths", type=int, help="override run.num_paths")
        p.add_argument("--workers", type=int, default=1, help="parallel path workers")

    p = sub.add_parser("entropy-rate", help="print entropy rate of a stationary model")
    common(p)
    p.set_defaults(func=cmd_entropy_rate)

    p = sub.add_parser("simulate", help="run the ensemble and emit CSVs")
    common(p)
    p.add_argument("--out", help="output directory (default: cwd)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the proportionality/affine laws")
    p.add_argument("theorem", choices=["thm1", "thm2"])
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IrreducibilityError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
