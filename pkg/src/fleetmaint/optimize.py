"""Schedule evaluation engine: precomputed cost tables and joint search.

Because fleet cost is additive over assets and each asset's cost depends
only on its own date and latent RUL, every schedule's cost distribution is
a sum of precomputed rows. The evaluation matrix stores, for each asset,
one row of per-scenario costs per candidate date (dates 1..T, then the
"no maintenance" candidate last). Joint search over all (T+1)^N schedules
then reduces to row sums, which makes exhaustive enumeration practical at
small fleet sizes.

Exhaustive search walks the schedule lattice in blocks. Candidate indices
are ordered lexicographically by (asset order, date order with "none"
last); ties on the objective resolve to the earliest schedule in that
order, so results do not depend on block size or thread count. The batch
CVaR evaluator deliberately mirrors the arithmetic of
:func:`fleetmaint.criteria.cvar_alpha` so that a schedule found by the
search reports the same objective when re-evaluated through the criteria
module.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .criteria import CUM_TOL, CostDistribution
from .fleet import FleetSpec, Schedule, validate_schedule
from .riskcost import RiskParams, failure_probability, performance_penalty
from .scenario import ScenarioSet

__all__ = [
    "EvaluationMatrix",
    "BudgetExceededError",
    "DEFAULT_EXHAUSTIVE_BUDGET",
    "build_matrix",
    "schedule_cost_distribution",
    "enumerate_schedules",
    "schedule_from_indices",
    "indices_from_schedule",
    "exhaustive_cvar_argmin",
    "coordinate_descent_cvar",
    "batch_cvar",
]

DEFAULT_EXHAUSTIVE_BUDGET = 1_000_000

# Rows of the flattened prefix lattice processed per block during joint
# search; bounds peak memory at roughly block * S * 8 bytes per array.
_BLOCK_ROWS = 4096


class BudgetExceededError(RuntimeError):
    """Raised when a joint enumeration would exceed the evaluation budget."""


@dataclass(frozen=True)
class EvaluationMatrix:
    """Per-asset, per-candidate-date, per-scenario cost table.

    ``costs[i, c, w]`` is asset i's cost in scenario w when maintained at
    date c+1 for c < T, or never maintained for c == T.
    """

    fleet: FleetSpec
    costs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.costs, dtype=float)
        expected = (self.fleet.n_assets, self.fleet.horizon + 1)
        if c.ndim != 3 or c.shape[:2] != expected:
            raise ValueError(f"costs must have shape ({expected[0]}, {expected[1]}, S)")
        c.setflags(write=False)
        object.__setattr__(self, "costs", c)

    @property
    def n_scenarios(self) -> int:
        return self.costs.shape[2]


def _asset_cost_table(asset, latent_rul: np.ndarray, horizon: int, params: RiskParams) -> np.ndarray:
    """(T+1, S) cost rows for one asset, vectorized over scenarios."""
    t_grid = np.arange(1, horizon + 1)
    margins = latent_rul[:, None] - t_grid[None, :]
    hazard = asset.cost_fail * failure_probability(margins, params)
    hazard += performance_penalty(margins, asset.cost_perf, params)
    # accrued[:, k] charges hazard for periods 1..k; column 0 is the empty sum.
    accrued = np.concatenate(
        [np.zeros((latent_rul.size, 1)), np.cumsum(hazard, axis=1)], axis=1
    )
    early = asset.cost_early * np.maximum(0.0, latent_rul[:, None] - t_grid[None, :]) / asset.rul_mean
    table = np.empty((horizon + 1, latent_rul.size))
    table[:horizon] = (asset.cost_pm + early + accrued[:, :horizon]).T
    table[horizon] = accrued[:, horizon]
    return table


def build_matrix(
    fleet: FleetSpec, scenarios: ScenarioSet, params: RiskParams = RiskParams()
) -> EvaluationMatrix:
    """Precompute every asset's cost rows against a frozen scenario set."""
    if scenarios.n_assets != fleet.n_assets or scenarios.horizon != fleet.horizon:
        raise ValueError("scenario set shape does not match the fleet")
    tables = [
        _asset_cost_table(asset, scenarios.latent_rul[i], fleet.horizon, params)
        for i, asset in enumerate(fleet.assets)
    ]
    return EvaluationMatrix(fleet=fleet, costs=np.stack(tables))


def indices_from_schedule(schedule: Schedule, fleet: FleetSpec) -> tuple[int, ...]:
    """Map a schedule to candidate indices (date-1, or T for unscheduled)."""
    violations = validate_schedule(schedule, fleet)
    if violations:
        raise ValueError("invalid schedule: " + "; ".join(violations))
    out = []
    for asset in fleet.assets:
        date = schedule.date_for(asset.id)
        out.append(fleet.horizon if date is None else date - 1)
    return tuple(out)


def schedule_from_indices(fleet: FleetSpec, indices: Sequence[int]) -> Schedule:
    dates: dict[str, int | None] = {}
    for asset, c in zip(fleet.assets, indices):
        dates[asset.id] = None if c == fleet.horizon else int(c) + 1
    return Schedule(dates=dates)


def schedule_cost_distribution(
    matrix: EvaluationMatrix, schedule: Schedule, weights: np.ndarray
) -> CostDistribution:
    """Fleet cost distribution of one schedule via precomputed row sums."""
    indices = indices_from_schedule(schedule, matrix.fleet)
    totals = np.zeros(matrix.n_scenarios)
    for i, c in enumerate(indices):
        totals += matrix.costs[i, c]
    return CostDistribution(values=totals, weights=np.asarray(weights, dtype=float))


def enumerate_schedules(fleet: FleetSpec, budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> Iterator[Schedule]:
    """All (T+1)^N schedules in lexicographic candidate order.

    Dates run 1..T then "none" for each asset, with the first asset as the
    most significant position. Refuses up front, rather than truncating,
    when the count would exceed the budget.
    """
    count = (fleet.horizon + 1) ** fleet.n_assets
    if count > budget:
        raise BudgetExceededError(
            f"{count} schedules exceed the enumeration budget of {budget}"
        )

    def _iter() -> Iterator[Schedule]:
        for combo in itertools.product(range(fleet.horizon + 1), repeat=fleet.n_assets):
            yield schedule_from_indices(fleet, combo)

    return _iter()


def batch_cvar(totals: np.ndarray, weights: np.ndarray, alpha: float) -> np.ndarray:
    """CVaR_alpha of each row of a (M, S) cost array.

    Matches criteria.cvar_alpha: lower-quantile VaR with 1e-12 slack on
    cumulative weights, then a weight-normalized mean over values >= VaR.
    Equal weights share one precomputed quantile index and use a partition
    instead of a full sort.
    """
    totals = np.atleast_2d(np.asarray(totals, dtype=float))
    weights = np.asarray(weights, dtype=float)
    s = weights.size
    if np.all(weights == weights[0]):
        cum = np.cumsum(weights)
        k = int(np.searchsorted(cum, alpha - CUM_TOL, side="left"))
        k = min(k, s - 1)
        var = np.partition(totals, k, axis=1)[:, k]
    else:
        order = np.argsort(totals, axis=1)
        sorted_vals = np.take_along_axis(totals, order, axis=1)
        cum = np.cumsum(weights[order], axis=1)
        k = np.minimum((cum < alpha - CUM_TOL).sum(axis=1), s - 1)
        var = sorted_vals[np.arange(totals.shape[0]), k]
    tail = totals >= var[:, None]
    tail_weight = tail @ weights
    tail_cost = (totals * tail) @ weights
    return tail_cost / tail_weight


def _map_ordered(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def exhaustive_cvar_argmin(
    matrix: EvaluationMatrix,
    weights: np.ndarray,
    alpha: float,
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    threads: int = 1,
) -> tuple[tuple[int, ...], float]:
    """Global CVaR minimizer over every schedule, by blocked enumeration.

    The lattice over the first N-1 assets is materialized in blocks; the
    last asset's candidates are folded in by broadcasting. Per-block
    results carry the flat schedule index, so the final reduction picks
    the earliest minimizer regardless of evaluation order.
    """
    costs = matrix.costs
    n, k1, s = costs.shape
    count = k1 ** n
    if count > budget:
        raise BudgetExceededError(
            f"{count} schedules exceed the enumeration budget of {budget}"
        )
    weights = np.asarray(weights, dtype=float)
    prefix_count = k1 ** (n - 1)

    def eval_block(start: int) -> tuple[float, int]:
        stop = min(start + _BLOCK_ROWS, prefix_count)
        rows = np.arange(start, stop)
        prefix = np.zeros((rows.size, s))
        if n > 1:
            parts = np.unravel_index(rows, (k1,) * (n - 1))
            for i in range(n - 1):
                prefix += costs[i][parts[i]]
        best_val, best_flat = np.inf, -1
        for c in range(k1):
            cvars = batch_cvar(prefix + costs[n - 1][c], weights, alpha)
            m = int(np.argmin(cvars))
            val = float(cvars[m])
            flat = (start + m) * k1 + c
            if val < best_val or (val == best_val and flat < best_flat):
                best_val, best_flat = val, flat
        return best_val, best_flat

    starts = list(range(0, prefix_count, _BLOCK_ROWS))
    results = _map_ordered(eval_block, starts, threads)
    best_val, best_flat = np.inf, -1
    for val, flat in results:
        if val < best_val or (val == best_val and flat < best_flat):
            best_val, best_flat = val, flat
    indices = tuple(int(x) for x in np.unravel_index(best_flat, (k1,) * n))
    return indices, best_val


def coordinate_descent_cvar(
    matrix: EvaluationMatrix,
    weights: np.ndarray,
    alpha: float,
    start: Sequence[int],
    threads: int = 1,
) -> tuple[tuple[int, ...], float]:
    """Asset-at-a-time CVaR descent from a warm start.

    Sweeps assets in fleet order, re-optimizing one date against the rest
    of the incumbent schedule, and accepts only strict improvements (ties
    keep the incumbent). Each accepted move lowers the objective on a
    finite lattice, so termination is guaranteed; the result is never
    worse than the warm start.
    """
    costs = matrix.costs
    n, k1, _ = costs.shape
    weights = np.asarray(weights, dtype=float)
    current = list(start)
    totals = np.zeros(matrix.n_scenarios)
    for i, c in enumerate(current):
        totals = totals + costs[i, c]
    current_val = float(batch_cvar(totals, weights, alpha)[0])

    improved = True
    while improved:
        improved = False
        for i in range(n):
            without = totals - costs[i, current[i]]
            cvars = batch_cvar(without[None, :] + costs[i], weights, alpha)
            c_best = int(np.argmin(cvars))
            if float(cvars[c_best]) < current_val:
                current[i] = c_best
                totals = without + costs[i, c_best]
                current_val = float(cvars[c_best])
                improved = True
    return tuple(current), current_val
