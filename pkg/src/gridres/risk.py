"""Risk metrics over an empirical loss distribution.

Value-at-risk is the smallest support loss whose cumulative probability
reaches the confidence level; conditional value-at-risk is the expected
loss in the tail beyond it.  The CVaR estimator splits the probability
atom sitting on the confidence boundary so discrete distributions are
handled without bias:

    CVaR = VaR + (1 - alpha)^-1 * sum_j w_j * max(U_j - VaR, 0)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mcengine import EmpiricalLossDistribution

DEFAULT_ALPHA = 0.95

# Slack for cumulative-weight comparisons; guards float accumulation when
# many equal atoms make the CDF land exactly on alpha.
_CDF_SLACK = 1e-12


class RiskError(ValueError):
    """Invalid distribution or confidence level."""


@dataclass(frozen=True)
class RiskMetrics:
    alpha: float
    var_mwh: float
    cvar_mwh: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise RiskError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.cvar_mwh < self.var_mwh - 1e-9:
            raise RiskError(
                f"cvar ({self.cvar_mwh}) must be >= var ({self.var_mwh})"
            )


def _losses_weights(dist: EmpiricalLossDistribution) -> tuple[np.ndarray, np.ndarray]:
    if not dist.points:
        raise RiskError("empty loss distribution")
    if not dist.normalized:
        raise RiskError("loss distribution is not normalized")
    losses = np.array([p[1] for p in dist.points])
    weights = np.array([p[2] for p in dist.points])
    if (weights < 0).any():
        raise RiskError("distribution weights must be >= 0")
    if abs(float(weights.sum()) - 1.0) > 1e-9:
        raise RiskError(
            f"distribution weights sum to {float(weights.sum())}, expected 1"
        )
    return losses, weights


def loss_cdf(dist: EmpiricalLossDistribution, zeta: float) -> float:
    """P(loss <= zeta): right-continuous step function over the support."""
    losses, weights = _losses_weights(dist)
    return float(weights[losses <= zeta].sum())


def var(dist: EmpiricalLossDistribution, alpha: float = DEFAULT_ALPHA) -> float:
    """Smallest support loss with cumulative probability >= alpha."""
    if not 0.0 < alpha < 1.0:
        raise RiskError(f"alpha must be in (0, 1), got {alpha}")
    losses, weights = _losses_weights(dist)
    order = np.argsort(losses, kind="stable")
    cum = np.cumsum(weights[order])
    idx = int(np.searchsorted(cum, alpha - _CDF_SLACK, side="left"))
    idx = min(idx, len(losses) - 1)
    return float(losses[order][idx])


def cvar(dist: EmpiricalLossDistribution, alpha: float = DEFAULT_ALPHA) -> float:
    """Expected loss in the worst (1 - alpha) probability tail.

    Equals the atom-splitting conditional tail expectation; always at
    least the VaR at the same level.
    """
    zeta = var(dist, alpha)
    losses, weights = _losses_weights(dist)
    excess = np.maximum(losses - zeta, 0.0)
    return float(zeta + (excess * weights).sum() / (1.0 - alpha))


def risk_metrics(dist: EmpiricalLossDistribution, alpha: float = DEFAULT_ALPHA) -> RiskMetrics:
    return RiskMetrics(alpha=alpha, var_mwh=var(dist, alpha), cvar_mwh=cvar(dist, alpha))
