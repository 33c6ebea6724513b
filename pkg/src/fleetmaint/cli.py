"""Command-line interface and study pipeline.

Subcommands: gen-fleet, gen-scenarios, evaluate, optimize, study. All of
them accept --config (JSON), --seed (overrides the config seeds), --out,
and --threads. Exit codes: 0 on success, 2 for configuration problems,
3 for runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config, parse_config
from .criteria import CostDistribution, cvar_alpha, expected_cost, var_alpha
from .fleet import FleetSpec, Schedule, validate_schedule
from .optimize import EvaluationMatrix, build_matrix, schedule_cost_distribution
from .policies import PolicyKind, run_policy
from .report import EcdfCurve, PolicySummary, ecdf, emit_outputs, summarize_policy
from .scenario import ScenarioSet, generate_scenarios, write_scenario_csvs

__all__ = ["main", "run_study", "compute_study", "StudyResult", "POLICY_ORDER"]

POLICY_ORDER = (
    PolicyKind.INTEGRATED_EXPECTED,
    PolicyKind.INTEGRATED_CVAR,
    PolicyKind.CALENDAR_ONLY,
    PolicyKind.RUL_THRESHOLD,
    PolicyKind.USAGE_ONLY,
)


@dataclass
class StudyResult:
    """Everything a full study computes, before any files are written."""

    fleet: FleetSpec
    scenarios: ScenarioSet
    matrix: EvaluationMatrix
    schedules: dict[str, Schedule]
    distributions: dict[str, CostDistribution]
    summaries: list[PolicySummary]
    curves: dict[str, EcdfCurve]


def compute_study(config: RunConfig, threads: int = 1) -> StudyResult:
    """Run every policy against one shared scenario set."""
    fleet = config.build_fleet()
    scenarios = generate_scenarios(fleet, config.n_scenarios, config.scenario_seed)
    matrix = build_matrix(fleet, scenarios, config.risk)
    schedules: dict[str, Schedule] = {}
    distributions: dict[str, CostDistribution] = {}
    summaries: list[PolicySummary] = []
    curves: dict[str, EcdfCurve] = {}
    for kind in POLICY_ORDER:
        schedule = run_policy(
            kind,
            fleet,
            scenarios,
            config.risk,
            trigger_prob=config.trigger_prob,
            alpha=config.alpha,
            matrix=matrix,
            budget=config.exhaustive_budget,
            threads=threads,
        )
        name = kind.value
        schedules[name] = schedule
        distributions[name] = schedule_cost_distribution(matrix, schedule, scenarios.weights)
        summaries.append(
            summarize_policy(
                name, schedule, matrix, scenarios.weights, config.alpha,
                fleet, scenarios, config.risk,
            )
        )
        curves[name] = ecdf(distributions[name])
    return StudyResult(
        fleet=fleet,
        scenarios=scenarios,
        matrix=matrix,
        schedules=schedules,
        distributions=distributions,
        summaries=summaries,
        curves=curves,
    )


def run_study(
    config: RunConfig, out_dir=None, threads: int = 1
) -> tuple[StudyResult, list[Path]]:
    """Compute a study and emit its output files."""
    result = compute_study(config, threads=threads)
    meta = {"seed": config.scenario_seed, "config": config.to_json_dict()}
    paths = emit_outputs(
        result.summaries,
        result.curves,
        result.schedules,
        out_dir if out_dir is not None else config.out_dir,
        result.fleet,
        meta,
    )
    return result, paths


def _print_summary_table(summaries: list[PolicySummary]) -> None:
    print(
        f"{'policy':<22}{'expected_cost':>14}{'cvar':>12}"
        f"{'mean_time':>11}{'failure_proxy':>15}"
    )
    for s in summaries:
        print(
            f"{s.policy:<22}{s.expected_cost:>14.6g}{s.cvar:>12.6g}"
            f"{s.mean_maintenance_time:>11.6g}{s.mean_failure_proxy:>15.6g}"
        )


def _write_rows(path: Path, header, rows) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        Path(path).unlink(missing_ok=True)
        raise OSError(f"failed writing {path}: {exc}") from exc


def _write_fleet_csv(fleet: FleetSpec, path: Path) -> None:
    header = (
        "id", "calendar_limit", "usage_limit", "rul_mean", "rul_std",
        "usage_mean_per_period", "usage_cv", "initial_age", "initial_usage",
        "cost_pm", "cost_fail", "cost_perf", "cost_early",
    )
    rows = [
        [
            a.id,
            *(
                format(getattr(a, k), ".17g")
                for k in header[1:]
            ),
        ]
        for a in fleet.assets
    ]
    _write_rows(path, header, rows)


def _read_schedule_csv(path: Path, fleet: FleetSpec) -> Schedule:
    dates: dict[str, int | None] = {}
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or set(reader.fieldnames) != {"asset_id", "date"}:
                raise ValueError(
                    f"schedule file {path} must have exactly the columns asset_id,date"
                )
            for row in reader:
                raw = row["date"].strip()
                if raw == "none":
                    dates[row["asset_id"]] = None
                else:
                    try:
                        dates[row["asset_id"]] = int(raw)
                    except ValueError:
                        raise ValueError(
                            f"schedule file {path}: bad date {raw!r} for {row['asset_id']!r}"
                        ) from None
    except OSError as exc:
        raise ValueError(f"cannot read schedule file {path}: {exc}") from exc
    return Schedule(dates=dates)


def _load(args) -> RunConfig:
    config = load_config(args.config) if args.config else parse_config({})
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def _out_dir(args, config: RunConfig) -> Path:
    out = Path(args.out) if args.out else Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_gen_fleet(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    path = out / "fleet.csv"
    _write_fleet_csv(config.build_fleet(), path)
    print(f"wrote {path}")
    return 0


def _cmd_gen_scenarios(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    fleet = config.build_fleet()
    scenarios = generate_scenarios(fleet, config.n_scenarios, config.scenario_seed)
    usage_path, rul_path = out / "scenario_usage.csv", out / "scenario_rul.csv"
    try:
        write_scenario_csvs(scenarios, fleet, usage_path, rul_path)
    except OSError:
        usage_path.unlink(missing_ok=True)
        rul_path.unlink(missing_ok=True)
        raise
    print(f"wrote {usage_path}")
    print(f"wrote {rul_path}")
    return 0


def _cmd_evaluate(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    fleet = config.build_fleet()
    schedule = _read_schedule_csv(Path(args.schedule), fleet)
    violations = validate_schedule(schedule, fleet)
    if violations:
        for v in violations:
            print(f"invalid schedule: {v}", file=sys.stderr)
        return 3
    scenarios = generate_scenarios(fleet, config.n_scenarios, config.scenario_seed)
    matrix = build_matrix(fleet, scenarios, config.risk)
    dist = schedule_cost_distribution(matrix, schedule, scenarios.weights)
    print(f"expected_cost={expected_cost(dist):.12g}")
    print(f"var_{config.alpha:g}={var_alpha(dist, config.alpha):.12g}")
    print(f"cvar_{config.alpha:g}={cvar_alpha(dist, config.alpha):.12g}")
    path = out / "eval_distribution.csv"
    _write_rows(
        path,
        ("scenario", "cost", "weight"),
        [
            [w, format(dist.values[w], ".17g"), format(dist.weights[w], ".17g")]
            for w in range(dist.values.size)
        ],
    )
    print(f"wrote {path}")
    return 0


def _cmd_optimize(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    fleet = config.build_fleet()
    scenarios = generate_scenarios(fleet, config.n_scenarios, config.scenario_seed)
    matrix = build_matrix(fleet, scenarios, config.risk)
    kind = (
        PolicyKind.INTEGRATED_EXPECTED
        if args.criterion == "expected"
        else PolicyKind.INTEGRATED_CVAR
    )
    schedule = run_policy(
        kind,
        fleet,
        scenarios,
        config.risk,
        alpha=config.alpha,
        matrix=matrix,
        budget=config.exhaustive_budget,
        threads=args.threads,
    )
    dist = schedule_cost_distribution(matrix, schedule, scenarios.weights)
    objective = (
        expected_cost(dist) if args.criterion == "expected" else cvar_alpha(dist, config.alpha)
    )
    path = out / "schedule.csv"
    _write_rows(
        path,
        ("asset_id", "date"),
        [
            [a.id, "none" if schedule.date_for(a.id) is None else schedule.date_for(a.id)]
            for a in fleet.assets
        ],
    )
    print(f"criterion={args.criterion} alpha={config.alpha:g} objective={objective:.12g}")
    print(f"wrote {path}")
    return 0


def _cmd_study(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    result, paths = run_study(config, out_dir=out, threads=args.threads)
    _print_summary_table(result.summaries)
    for p in paths:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fleetmaint",
        description="Scenario-based maintenance scheduling for multi-asset fleets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", help="JSON config file (defaults apply if omitted)")
        sp.add_argument("--seed", type=int, help="override the fleet and scenario seeds")
        sp.add_argument("--out", help="output directory (default from config)")
        sp.add_argument("--threads", type=int, default=1, help="parallelism cap")

    sp = sub.add_parser("gen-fleet", help="sample a fleet and write fleet.csv")
    add_common(sp)
    sp.set_defaults(func=_cmd_gen_fleet)

    sp = sub.add_parser("gen-scenarios", help="sample scenarios and export them as CSV")
    add_common(sp)
    sp.set_defaults(func=_cmd_gen_scenarios)

    sp = sub.add_parser("evaluate", help="cost distribution of a schedule file")
    add_common(sp)
    sp.add_argument("--schedule", required=True, help="CSV with asset_id,date rows")
    sp.set_defaults(func=_cmd_evaluate)

    sp = sub.add_parser("optimize", help="find a schedule by expected cost or CVaR")
    add_common(sp)
    sp.add_argument("--criterion", choices=("expected", "cvar"), required=True)
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("study", help="full policy comparison with report files")
    add_common(sp)
    sp.set_defaults(func=_cmd_study)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to a distinct exit code
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
