"""Scenario-based maintenance scheduling for multi-asset fleets.

The package models a small fleet over a finite horizon, samples usage and
remaining-life uncertainty into a frozen scenario set, prices candidate
maintenance dates with a four-part risk cost, and compares threshold
baselines against schedules optimized by expected cost or CVaR.
"""

__version__ = "0.1.0"

from .criteria import CostDistribution, cvar_alpha, expected_cost, var_alpha
from .fleet import (
    AssetSpec,
    AssetState,
    FleetGenConfig,
    FleetSpec,
    Schedule,
    advance_state,
    generate_fleet,
    validate_schedule,
)
from .optimize import (
    BudgetExceededError,
    EvaluationMatrix,
    build_matrix,
    enumerate_schedules,
    schedule_cost_distribution,
)
from .policies import (
    PolicyKind,
    calendar_only,
    integrated_cvar,
    integrated_expected,
    rul_threshold,
    usage_only,
)
from .report import EcdfCurve, PolicySummary, ecdf, emit_outputs, summarize_policy
from .riskcost import (
    CostBreakdown,
    CostSample,
    RiskParams,
    asset_scenario_cost,
    early_penalty,
    effective_rul,
    failure_probability,
    failure_proxy,
    performance_penalty,
    total_cost,
)
from .scenario import (
    ScenarioSet,
    cell_stream,
    cumulative_usage,
    generate_scenarios,
    sample_gamma,
    sample_truncated_normal,
)

__all__ = [
    "__version__",
    "AssetSpec",
    "AssetState",
    "FleetGenConfig",
    "FleetSpec",
    "Schedule",
    "advance_state",
    "generate_fleet",
    "validate_schedule",
    "ScenarioSet",
    "cell_stream",
    "cumulative_usage",
    "generate_scenarios",
    "sample_gamma",
    "sample_truncated_normal",
    "RiskParams",
    "CostBreakdown",
    "CostSample",
    "asset_scenario_cost",
    "early_penalty",
    "effective_rul",
    "failure_probability",
    "failure_proxy",
    "performance_penalty",
    "total_cost",
    "CostDistribution",
    "expected_cost",
    "var_alpha",
    "cvar_alpha",
    "PolicyKind",
    "calendar_only",
    "usage_only",
    "rul_threshold",
    "integrated_expected",
    "integrated_cvar",
    "EvaluationMatrix",
    "BudgetExceededError",
    "build_matrix",
    "schedule_cost_distribution",
    "enumerate_schedules",
    "EcdfCurve",
    "PolicySummary",
    "ecdf",
    "emit_outputs",
    "summarize_policy",
]
