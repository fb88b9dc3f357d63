"""Feeder resilience under probabilistic wind events: Monte Carlo loss
simulation, restoration via DG islanding, and VaR/CVaR risk metrics."""

from .damage import DamageScenario, initial_load_loss, sample_damage_scenario, trial_stream
from .feeder import (
    Bus,
    DistributedGenerator,
    FeederNetwork,
    Line,
    Switch,
    energized_set,
    load_feeder,
    save_feeder,
)
from .fragility import (
    FragilityCurve,
    WindProfile,
    apply_hardening,
    failure_probability,
    sample_wind_speed,
    wind_density,
)
from .mcengine import (
    ConvergenceReport,
    EmpiricalLossDistribution,
    TrialBatch,
    build_loss_distribution,
    convergence,
    grid_speeds,
    run_trials,
)
from .rescurve import (
    PhaseTimes,
    ResilienceCurve,
    build_resilience_curve,
    damage_assessment_time,
    performance_loss,
)
from .restoration import RestorationPlan, plan_restoration, switching_time
from .risk import RiskMetrics, cvar, loss_cdf, risk_metrics, var
from .scenario import ScenarioConfig, assemble_network, load_scenario_config

__version__ = "0.1.0"

__all__ = [
    "Bus",
    "ConvergenceReport",
    "DamageScenario",
    "DistributedGenerator",
    "EmpiricalLossDistribution",
    "FeederNetwork",
    "FragilityCurve",
    "Line",
    "PhaseTimes",
    "ResilienceCurve",
    "RestorationPlan",
    "RiskMetrics",
    "ScenarioConfig",
    "Switch",
    "TrialBatch",
    "WindProfile",
    "apply_hardening",
    "assemble_network",
    "build_loss_distribution",
    "build_resilience_curve",
    "convergence",
    "cvar",
    "damage_assessment_time",
    "energized_set",
    "failure_probability",
    "grid_speeds",
    "initial_load_loss",
    "load_feeder",
    "load_scenario_config",
    "loss_cdf",
    "performance_loss",
    "plan_restoration",
    "risk_metrics",
    "run_trials",
    "sample_damage_scenario",
    "sample_wind_speed",
    "save_feeder",
    "switching_time",
    "trial_stream",
    "var",
    "wind_density",
]
