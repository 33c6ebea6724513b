"""Scalar ranking criteria over discrete cost distributions.

VaR here is the lower alpha-quantile of the discrete distribution: the
smallest support value whose cumulative weight reaches alpha. CVaR is the
weight-normalized mean of all outcomes at or above that value (the literal
tail conditional expectation, evaluated directly on the support rather
than through a minimization form). On discrete distributions this choice
is exact, needs no auxiliary variable, and keeps ties well defined.

Cumulative-weight comparisons allow 1e-12 of absolute slack; without it,
accumulated rounding in equal weights (ten 0.1 entries sum to just under
1) would shift quantiles off their exact discrete values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CostDistribution", "expected_cost", "var_alpha", "cvar_alpha", "CUM_TOL"]

CUM_TOL = 1e-12


@dataclass(frozen=True)
class CostDistribution:
    """A finite weighted distribution of schedule costs."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if v.ndim != 1 or w.ndim != 1 or v.shape != w.shape:
            raise ValueError("values and weights must be 1-D arrays of equal length")
        if v.size == 0:
            raise ValueError("distribution must be nonempty")
        if np.any(w < 0):
            raise ValueError("weights must be >= 0")
        if abs(float(w.sum()) - 1.0) > CUM_TOL:
            raise ValueError("weights must sum to 1 within 1e-12")
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")


def expected_cost(dist: CostDistribution) -> float:
    """Weight-averaged cost."""
    return float(dist.weights @ dist.values)


def var_alpha(dist: CostDistribution, alpha: float) -> float:
    """Lower alpha-quantile: smallest value whose cumulative weight reaches alpha.

    Equal values are merged before the quantile walk so duplicated support
    points behave exactly like a single point with the combined weight.
    """
    _check_alpha(alpha)
    uniq, inverse = np.unique(dist.values, return_inverse=True)
    merged = np.bincount(inverse, weights=dist.weights)
    cum = np.cumsum(merged)
    idx = int(np.searchsorted(cum, alpha - CUM_TOL, side="left"))
    idx = min(idx, uniq.size - 1)
    return float(uniq[idx])


def cvar_alpha(dist: CostDistribution, alpha: float) -> float:
    """Mean cost over the upper tail {z : z >= VaR_alpha}, weight-normalized."""
    v = var_alpha(dist, alpha)
    tail = dist.values >= v
    tail_weight = float(dist.weights[tail].sum())
    return float(dist.weights[tail] @ dist.values[tail]) / tail_weight
