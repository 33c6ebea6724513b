"""Degradation-risk cost model for candidate maintenance dates.

The model prices one asset-scenario trajectory as four nonnegative terms:
a fixed preventive-maintenance charge, an expected-failure charge, a
performance-loss charge, and an early-intervention penalty. Risk accrues
period by period from the start of the horizon up to, but not including,
the maintenance date; maintaining at the start of period tau means no
hazard is charged for tau itself, and nothing after the action is modeled
within the horizon. An unscheduled asset accrues hazard over the full
horizon and pays neither the maintenance charge nor the early penalty.

The hazard at period t depends on the effective remaining life margin
m = R - t of the scenario's latent RUL R:

* failure probability: p_max for m <= 0, else min(p_max, p_max * exp(-lambda * m)),
* performance loss: a linear ramp that switches on once m falls below a
  wear-in window W and saturates at m <= 0.

Usage affects maintenance timing only through the usage-threshold policy;
it does not enter the hazard, which is driven by the latent RUL alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fleet import AssetSpec, FleetSpec, Schedule, validate_schedule
from .scenario import ScenarioSet

__all__ = [
    "RiskParams",
    "CostBreakdown",
    "CostSample",
    "effective_rul",
    "failure_probability",
    "performance_penalty",
    "early_penalty",
    "asset_scenario_cost",
    "total_cost",
    "failure_proxy",
]


@dataclass(frozen=True)
class RiskParams:
    """Shared hazard-shape constants.

    p_max caps the per-period failure probability, decay_rate sets how fast
    risk falls off with positive margin, and perf_window is the margin below
    which performance loss starts to accrue.
    """

    p_max: float = 0.95
    decay_rate: float = 0.75
    perf_window: float = 4.0

    def __post_init__(self) -> None:
        if not 0.0 < self.p_max <= 0.95:
            raise ValueError("p_max must lie in (0, 0.95]")
        if self.decay_rate <= 0:
            raise ValueError("decay_rate must be > 0")
        if self.perf_window <= 0:
            raise ValueError("perf_window must be > 0")


@dataclass(frozen=True)
class CostBreakdown:
    """Cost components for one asset in one scenario."""

    pm: float
    fail: float
    perf: float
    early: float

    def __post_init__(self) -> None:
        for name in ("pm", "fail", "perf", "early"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} component must be >= 0")

    @property
    def total(self) -> float:
        return self.pm + self.fail + self.perf + self.early


@dataclass(frozen=True)
class CostSample:
    """Fleet cost of one schedule under one scenario, by asset."""

    scenario: int
    breakdowns: dict[str, CostBreakdown]

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakdowns", dict(self.breakdowns))

    @property
    def total(self) -> float:
        return sum(b.total for b in self.breakdowns.values())


def effective_rul(latent_rul: float, period: int):
    """Remaining life margin at a period; negative once nominal life is spent."""
    if period < 1:
        raise ValueError("period must be >= 1")
    return latent_rul - period


def failure_probability(margin, params: RiskParams = RiskParams()):
    """Per-period failure probability at a remaining-life margin.

    Saturates at p_max for exhausted margins and decays exponentially with
    positive margin. Accepts scalars or arrays; scalar in, float out.
    """
    m = np.asarray(margin, dtype=float)
    decayed = params.p_max * np.exp(-params.decay_rate * np.maximum(m, 0.0))
    p = np.where(m <= 0.0, params.p_max, np.minimum(params.p_max, decayed))
    if np.ndim(margin) == 0:
        return float(p)
    return p


def performance_penalty(margin, cost_perf: float, params: RiskParams = RiskParams()):
    """Performance-loss charge at a margin: a clamped linear ramp.

    Zero while the margin is at least perf_window, rising linearly to the
    full coefficient as the margin reaches zero. Accepts scalars or arrays.
    """
    if cost_perf < 0:
        raise ValueError("cost_perf must be >= 0")
    m = np.asarray(margin, dtype=float)
    w = params.perf_window
    ramp = np.clip((w - m) / w, 0.0, 1.0)
    out = cost_perf * ramp
    if np.ndim(margin) == 0:
        return float(out)
    return out


def early_penalty(latent_rul, maintenance_time: int, rul_mean: float, cost_early: float):
    """Opportunity cost of maintaining while useful life remains.

    Proportional to the remaining life given up at the action date, in
    units of the asset's mean life so assets of different longevity are
    penalized comparably. Zero when the action happens at or past the
    latent RUL.
    """
    if maintenance_time < 1:
        raise ValueError("maintenance_time must be >= 1")
    if rul_mean <= 0:
        raise ValueError("rul_mean must be > 0")
    if cost_early < 0:
        raise ValueError("cost_early must be >= 0")
    r = np.asarray(latent_rul, dtype=float)
    out = cost_early * np.maximum(0.0, r - maintenance_time) / rul_mean
    if np.ndim(latent_rul) == 0:
        return float(out)
    return out


def _hazard(asset: AssetSpec, margin: float, params: RiskParams) -> tuple[float, float]:
    fail = asset.cost_fail * failure_probability(margin, params)
    perf = performance_penalty(margin, asset.cost_perf, params)
    return fail, perf


def asset_scenario_cost(
    asset: AssetSpec,
    date: int | None,
    latent_rul: float,
    horizon: int,
    params: RiskParams = RiskParams(),
) -> CostBreakdown:
    """Cost breakdown for one asset, candidate date, and latent RUL.

    A dated action charges the maintenance fee plus hazard over periods
    1..date-1 plus the early penalty at the date. No action charges hazard
    over the whole horizon and nothing else.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if date is not None:
        if isinstance(date, bool) or int(date) != date:
            raise ValueError(f"date must be an integer period, got {date!r}")
        if not 1 <= date <= horizon:
            raise ValueError(f"date {date} out of horizon 1..{horizon}")
    last_accrual = horizon if date is None else date - 1
    fail = 0.0
    perf = 0.0
    for t in range(1, last_accrual + 1):
        f, p = _hazard(asset, effective_rul(latent_rul, t), params)
        fail += f
        perf += p
    if date is None:
        return CostBreakdown(pm=0.0, fail=fail, perf=perf, early=0.0)
    early = early_penalty(latent_rul, date, asset.rul_mean, asset.cost_early)
    return CostBreakdown(pm=asset.cost_pm, fail=fail, perf=perf, early=early)


def total_cost(
    schedule: Schedule,
    fleet: FleetSpec,
    scenarios: ScenarioSet,
    scenario: int,
    params: RiskParams = RiskParams(),
) -> CostSample:
    """Fleet cost of a schedule under one scenario; additive over assets."""
    violations = validate_schedule(schedule, fleet)
    if violations:
        raise ValueError("invalid schedule: " + "; ".join(violations))
    if not 0 <= scenario < scenarios.n_scenarios:
        raise ValueError(f"scenario {scenario} out of range")
    breakdowns = {}
    for i, asset in enumerate(fleet.assets):
        breakdowns[asset.id] = asset_scenario_cost(
            asset,
            schedule.date_for(asset.id),
            float(scenarios.latent_rul[i, scenario]),
            fleet.horizon,
            params,
        )
    return CostSample(scenario=scenario, breakdowns=breakdowns)


def failure_proxy(
    schedule: Schedule,
    fleet: FleetSpec,
    scenarios: ScenarioSet,
    params: RiskParams = RiskParams(),
) -> float:
    """Scenario-weighted accumulated failure probability of a schedule.

    Sums the per-period failure probabilities over each asset's accrual
    window (up to the action date, or the whole horizon when unscheduled)
    and averages over scenarios. A unitless exposure measure for reporting;
    it is not a cost term.
    """
    violations = validate_schedule(schedule, fleet)
    if violations:
        raise ValueError("invalid schedule: " + "; ".join(violations))
    t_grid = np.arange(1, fleet.horizon + 1)
    acc = 0.0
    for i, asset in enumerate(fleet.assets):
        date = schedule.date_for(asset.id)
        last_accrual = fleet.horizon if date is None else date - 1
        if last_accrual < 1:
            continue
        margins = scenarios.latent_rul[i][:, None] - t_grid[None, :last_accrual]
        probs = failure_probability(margins, params)
        acc += float(scenarios.weights @ probs.sum(axis=1))
    return acc
