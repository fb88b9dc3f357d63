"""Monte Carlo orchestration: trial batches, convergence, loss distribution.

For each sampled wind speed the engine runs independent damage/restoration
trials, each on its own deterministic random stream, and maps the
per-speed average energy loss onto the wind-speed density to build the
empirical loss distribution the risk metrics are computed from.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .damage import derive_child_seed, initial_load_loss, sample_damage_scenario, trial_stream
from .feeder import FeederNetwork
from .fragility import WindProfile, wind_density, wind_quantile
from .rescurve import CurveParams, build_resilience_curve, performance_loss
from .restoration import RestorationPlan, plan_restoration

DEFAULT_TRIALS_PER_SPEED = 1000
DEFAULT_GRID_SIZE = 25
DEFAULT_CONVERGENCE_TOL = 0.01
DEFAULT_CONVERGENCE_WINDOW = 100

# Quantile span for the default wind-speed grid; wide enough to resolve
# the tail that CVaR reads.
_GRID_QUANTILE_LO = 0.001
_GRID_QUANTILE_HI = 0.999


@dataclass(frozen=True)
class TrialParams:
    """Knobs shared by every trial of a run."""

    event_duration_h: float = 2.0
    assessment_normal_h: float = 2.0
    smart_assessment_multiplier: float = 0.8
    critical_weight: float = 10.0

    def curve_params(self, config_label: str) -> CurveParams:
        mult = self.smart_assessment_multiplier if config_label == "smart" else 1.0
        return CurveParams(
            event_duration_h=self.event_duration_h,
            assessment_normal_h=self.assessment_normal_h,
            assessment_multiplier=mult,
        )


@dataclass(frozen=True)
class TrialRecord:
    """Per-trial diagnostics alongside the headline MWh loss."""

    trial: int
    loss_mwh: float
    initial_loss_kw: float
    assessment_h: float
    restored_kw: float
    switching_h: float
    failed_lines: tuple[str, ...] = ()
    plan: RestorationPlan | None = None


@dataclass
class TrialBatch:
    wind_speed_m_s: float
    losses_mwh: list[float]
    config_label: str
    master_seed: int
    records: list[TrialRecord] = field(default_factory=list)


@dataclass
class EmpiricalLossDistribution:
    """(wind speed, loss MWh, probability weight) support points."""

    points: list[tuple[float, float, float]]
    normalized: bool = False


@dataclass
class ConvergenceReport:
    running_means: list[float]
    converged_at: int | None
    tolerance: float


def run_trials(
    net: FeederNetwork,
    omega: float,
    n: int,
    master_seed: int,
    params: TrialParams = TrialParams(),
    threads: int = 1,
    plan_cache: dict | None = None,
    keep_failed: bool = False,
) -> TrialBatch:
    """Run ``n`` damage/loss trials at one wind speed.

    Trial ``i`` draws from a stream derived from (master_seed, i) only, so
    the losses list is identical for any thread count.
    """
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got {n}")
    net.require_fragility()
    net.failure_vector(omega)  # warm the per-speed cache before threading
    smart = net.config_label == "smart"
    if smart and plan_cache is None:
        plan_cache = {}
    curve_params = params.curve_params(net.config_label)

    def one_trial(i: int) -> TrialRecord:
        rng = trial_stream(master_seed, i)
        scenario = sample_damage_scenario(net, omega, rng, trial_index=i)
        loss_kw = initial_load_loss(net, scenario)
        plan: RestorationPlan | None = None
        if smart:
            key = frozenset(k for k, v in scenario.line_failed.items() if v)
            plan = plan_cache.get(key)
            if plan is None:
                plan = plan_restoration(
                    net, scenario, critical_weight=params.critical_weight
                )
                plan_cache[key] = plan
        curve = build_resilience_curve(
            loss_kw, plan, omega, rng, curve_params, config_label=net.config_label
        )
        failed = (
            tuple(k for k, v in scenario.line_failed.items() if v) if keep_failed else ()
        )
        return TrialRecord(
            trial=i,
            loss_mwh=performance_loss(curve),
            initial_loss_kw=loss_kw,
            assessment_h=curve.times.restore_start_h - curve.times.event_end_h,
            restored_kw=plan.restored_kw if plan is not None else 0.0,
            switching_h=plan.switching_time_h if plan is not None else 0.0,
            failed_lines=failed,
            plan=plan if keep_failed else None,
        )

    if threads <= 1:
        records = [one_trial(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one_trial, range(n)))
    return TrialBatch(
        wind_speed_m_s=omega,
        losses_mwh=[r.loss_mwh for r in records],
        config_label=net.config_label,
        master_seed=master_seed,
        records=records,
    )


def running_means(losses: list[float]) -> list[float]:
    return list(np.cumsum(losses) / np.arange(1, len(losses) + 1))


def convergence(
    batch: TrialBatch,
    tol: float = DEFAULT_CONVERGENCE_TOL,
    window: int = DEFAULT_CONVERGENCE_WINDOW,
) -> ConvergenceReport:
    """Locate the first trial whose running mean has stayed within ``tol``
    (relative) of the batch's final-window mean for ``window`` consecutive
    trials; None if that never happens.
    """
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    n = len(batch.losses_mwh)
    if n < window:
        raise ValueError(f"need at least window={window} trials, got {n}")
    means = running_means(batch.losses_mwh)
    target = float(np.mean(means[n - window :]))
    limit = tol * abs(target)
    ok = [abs(m - target) <= limit for m in means]
    run = 0
    converged_at = None
    for i, good in enumerate(ok):
        run = run + 1 if good else 0
        if run >= window:
            converged_at = i + 1  # 1-based trial count
            break
    return ConvergenceReport(running_means=means, converged_at=converged_at, tolerance=tol)


def grid_speeds(profile: WindProfile, size: int = DEFAULT_GRID_SIZE) -> list[float]:
    """Evenly spaced wind speeds spanning the profile's 0.1%-99.9% quantiles."""
    if size < 1:
        raise ValueError(f"grid size must be >= 1, got {size}")
    lo = wind_quantile(profile, _GRID_QUANTILE_LO)
    hi = wind_quantile(profile, _GRID_QUANTILE_HI)
    speeds = np.linspace(lo, hi, size)
    unique = sorted(set(float(s) for s in speeds))
    return unique


def distribution_from_batches(
    profile: WindProfile,
    batches: list[TrialBatch],
    per_trial: bool = False,
) -> EmpiricalLossDistribution:
    """Weight per-speed losses by the wind density and normalize.

    Default mode keeps one point per speed carrying the batch mean; the
    per-trial mode keeps every trial loss, splitting each speed's weight
    evenly across its trials (heavier tails, same wind weighting).
    """
    if not batches:
        raise ValueError("no trial batches")
    densities = np.array(
        [wind_density(profile, b.wind_speed_m_s) for b in batches]
    )
    total = float(densities.sum())
    if total <= 0:
        raise ValueError("wind profile has zero density on every grid speed")
    weights = densities / total
    points: list[tuple[float, float, float]] = []
    for batch, w in zip(batches, weights):
        if per_trial:
            share = float(w) / len(batch.losses_mwh)
            points.extend(
                (batch.wind_speed_m_s, loss, share) for loss in batch.losses_mwh
            )
        else:
            mean = float(np.mean(batch.losses_mwh))
            points.append((batch.wind_speed_m_s, mean, float(w)))
    return EmpiricalLossDistribution(points=points, normalized=True)


def build_loss_distribution(
    net: FeederNetwork,
    profile: WindProfile,
    grid: list[float],
    n_per_speed: int,
    master_seed: int,
    params: TrialParams = TrialParams(),
    threads: int = 1,
    per_trial: bool = False,
    plan_cache: dict | None = None,
) -> EmpiricalLossDistribution:
    """Sample the grid and assemble the empirical loss distribution."""
    batches = run_grid(
        net,
        grid,
        n_per_speed,
        master_seed,
        params=params,
        threads=threads,
        plan_cache=plan_cache,
    )
    return distribution_from_batches(profile, batches, per_trial=per_trial)


def run_grid(
    net: FeederNetwork,
    grid: list[float],
    n_per_speed: int,
    master_seed: int,
    params: TrialParams = TrialParams(),
    threads: int = 1,
    plan_cache: dict | None = None,
    keep_failed: bool = False,
) -> list[TrialBatch]:
    """One batch per grid speed, each on a child seed derived from the
    master seed and the speed's grid position (paired across configs)."""
    if not grid:
        raise ValueError("wind-speed grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("wind-speed grid must be strictly increasing")
    if net.config_label == "smart" and plan_cache is None:
        plan_cache = {}
    batches = []
    for j, omega in enumerate(grid):
        batches.append(
            run_trials(
                net,
                omega,
                n_per_speed,
                derive_child_seed(master_seed, j),
                params=params,
                threads=threads,
                plan_cache=plan_cache,
                keep_failed=keep_failed,
            )
        )
    return batches
