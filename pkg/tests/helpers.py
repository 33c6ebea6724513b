"""Shared factories for hand-built fleets and scenario sets."""

from __future__ import annotations

import numpy as np

from fleetmaint.fleet import AssetSpec, FleetSpec
from fleetmaint.scenario import ScenarioSet


def make_asset(**overrides) -> AssetSpec:
    params = dict(
        id="A1",
        calendar_limit=10.0,
        usage_limit=200.0,
        rul_mean=8.0,
        rul_std=1.5,
        usage_mean_per_period=15.0,
        usage_cv=0.25,
        initial_age=3.0,
        initial_usage=60.0,
    )
    params.update(overrides)
    return AssetSpec(**params)


def make_fleet(n_assets: int = 1, horizon: int = 12, **asset_overrides) -> FleetSpec:
    assets = tuple(
        make_asset(id=f"A{j + 1}", **asset_overrides) for j in range(n_assets)
    )
    return FleetSpec(assets=assets, horizon=horizon)


def const_scenarios(
    fleet: FleetSpec,
    ruls,
    n_scenarios: int | None = None,
    increment: float = 1.0,
) -> ScenarioSet:
    """Scenario set with fixed latent RULs and constant usage increments.

    ``ruls`` is either one value per asset (broadcast over scenarios) or a
    full (N, S) array.
    """
    ruls = np.asarray(ruls, dtype=float)
    if ruls.ndim == 1:
        s = n_scenarios or 1
        ruls = np.repeat(ruls[:, None], s, axis=1)
    n, s = ruls.shape
    assert n == fleet.n_assets
    return ScenarioSet(
        n_scenarios=s,
        weights=np.full(s, 1.0 / s),
        usage_increments=np.full((n, s, fleet.horizon), increment),
        latent_rul=ruls,
    )


def random_scenarios(fleet: FleetSpec, n_scenarios: int, seed: int) -> ScenarioSet:
    """Loosely structured random scenario set for property-style checks."""
    rng = np.random.default_rng(seed)
    n, t = fleet.n_assets, fleet.horizon
    inc = rng.uniform(5.0, 25.0, size=(n, n_scenarios, t))
    rul = rng.uniform(0.0, t + 3.0, size=(n, n_scenarios))
    return ScenarioSet(
        n_scenarios=n_scenarios,
        weights=np.full(n_scenarios, 1.0 / n_scenarios),
        usage_increments=inc,
        latent_rul=rul,
    )
