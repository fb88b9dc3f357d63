"""End-to-end experiment drivers shared by the service and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feeder import FeederNetwork
from .fragility import WindProfile
from .mcengine import (
    EmpiricalLossDistribution,
    TrialBatch,
    convergence,
    distribution_from_batches,
    grid_speeds,
    run_grid,
    run_trials,
)
from .risk import RiskMetrics, risk_metrics
from .scenario import ScenarioBase, ScenarioError


@dataclass
class SpeedConvergence:
    wind_speed_m_s: float
    converged_at: int | None
    n_trials: int
    final_mean_mwh: float


@dataclass
class SimulationResult:
    config_label: str
    profile_label: str
    alpha: float
    distribution: EmpiricalLossDistribution
    metrics: RiskMetrics
    batches: list[TrialBatch]
    convergence: list[SpeedConvergence]
    histogram: list[tuple[float, float, float]]


@dataclass
class CompareRow:
    config_label: str
    var_mwh: float
    cvar_mwh: float
    improved_over_base: bool


@dataclass
class CompareResult:
    alpha: float
    profile_label: str
    rows: list[CompareRow]
    speeds: list[float]
    mean_loss_by_config: dict[str, list[float]]


@dataclass
class PhaseStats:
    omega_m_s: float
    n_trials: int
    config_label: str
    mean_initial_loss_kw: float
    mean_assessment_h: float
    mean_restored_kw: float


def loss_histogram(
    dist: EmpiricalLossDistribution, bins: int
) -> list[tuple[float, float, float]]:
    """Weighted histogram of the loss axis in equal-width bins."""
    losses = np.array([p[1] for p in dist.points])
    weights = np.array([p[2] for p in dist.points])
    lo, hi = float(losses.min()), float(losses.max())
    if hi <= lo:
        return [(lo, hi, float(weights.sum()))]
    counts, edges = np.histogram(losses, bins=bins, range=(lo, hi), weights=weights)
    return [
        (float(edges[i]), float(edges[i + 1]), float(counts[i]))
        for i in range(len(counts))
    ]


def simulate(net: FeederNetwork, profile: WindProfile, cfg: ScenarioBase) -> SimulationResult:
    """Full run for one configuration: grid sweep, distribution, metrics,
    convergence summaries, and histogram bins."""
    grid = grid_speeds(profile, cfg.grid_size)
    batches = run_grid(
        net,
        grid,
        cfg.n_trials,
        cfg.master_seed,
        params=cfg.trial_params(),
        threads=cfg.threads,
        keep_failed=cfg.dump_scenarios,
    )
    dist = distribution_from_batches(profile, batches, per_trial=cfg.per_trial_distribution)
    metrics = risk_metrics(dist, cfg.alpha)
    reports = []
    for batch in batches:
        window = min(cfg.convergence_window, len(batch.losses_mwh))
        converged = None
        if window >= 2:
            converged = convergence(batch, tol=cfg.convergence_tol, window=window).converged_at
        reports.append(
            SpeedConvergence(
                wind_speed_m_s=batch.wind_speed_m_s,
                converged_at=converged,
                n_trials=len(batch.losses_mwh),
                final_mean_mwh=float(np.mean(batch.losses_mwh)),
            )
        )
    return SimulationResult(
        config_label=net.config_label,
        profile_label=profile.label,
        alpha=cfg.alpha,
        distribution=dist,
        metrics=metrics,
        batches=batches,
        convergence=reports,
        histogram=loss_histogram(dist, cfg.histogram_bins),
    )


def compare(
    nets: dict[str, FeederNetwork], profile: WindProfile, cfg: ScenarioBase
) -> CompareResult:
    """Paired-seed comparison of base/smart/robust configurations.

    All three runs share the master seed and grid, so per-trial random
    draws are common across configurations and the mean-loss curves are
    directly comparable speed by speed.
    """
    if set(nets) != {"base", "smart", "robust"}:
        raise ScenarioError(f"compare needs base/smart/robust, got {sorted(nets)}")
    grid = grid_speeds(profile, cfg.grid_size)
    rows: list[CompareRow] = []
    mean_by_config: dict[str, list[float]] = {}
    metrics_by_config: dict[str, RiskMetrics] = {}
    for label in ("base", "smart", "robust"):
        net = nets[label]
        batches = run_grid(
            net, grid, cfg.n_trials, cfg.master_seed, params=cfg.trial_params(), threads=cfg.threads
        )
        dist = distribution_from_batches(profile, batches, per_trial=cfg.per_trial_distribution)
        metrics_by_config[label] = risk_metrics(dist, cfg.alpha)
        mean_by_config[label] = [float(np.mean(b.losses_mwh)) for b in batches]
    base = metrics_by_config["base"]
    for label in ("base", "smart", "robust"):
        m = metrics_by_config[label]
        improved = label != "base" and m.var_mwh < base.var_mwh and m.cvar_mwh < base.cvar_mwh
        rows.append(
            CompareRow(
                config_label=label,
                var_mwh=m.var_mwh,
                cvar_mwh=m.cvar_mwh,
                improved_over_base=improved,
            )
        )
    return CompareResult(
        alpha=cfg.alpha,
        profile_label=profile.label,
        rows=rows,
        speeds=grid,
        mean_loss_by_config=mean_by_config,
    )


def phase_report(net: FeederNetwork, omega: float, cfg: ScenarioBase) -> PhaseStats:
    """Mean per-phase indicators at one wind speed: initial load cut off,
    assessment duration, and restored island load."""
    if omega < 0:
        raise ScenarioError(f"omega must be >= 0, got {omega}")
    batch = run_trials(
        net, omega, cfg.n_trials, cfg.master_seed, params=cfg.trial_params(), threads=cfg.threads
    )
    recs = batch.records
    return PhaseStats(
        omega_m_s=omega,
        n_trials=len(recs),
        config_label=net.config_label,
        mean_initial_loss_kw=float(np.mean([r.initial_loss_kw for r in recs])),
        mean_assessment_h=float(np.mean([r.assessment_h for r in recs])),
        mean_restored_kw=float(np.mean([r.restored_kw for r in recs])),
    )
