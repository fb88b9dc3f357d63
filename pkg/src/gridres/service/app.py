"""FastAPI service wrapping the simulation core.

The ``handle_*`` functions hold the endpoint logic and raise domain
errors; the route wrappers translate those to HTTP statuses.  The CLI
calls the handlers in-process by default and over HTTP with ``--server``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import experiment
from ..feeder import FeederError, FeederNetwork
from ..fragility import FragilityError, WindProfile
from ..fixtures import list_fixtures, load_fixture_json
from ..restoration import plan_to_dict
from ..risk import RiskError
from ..scenario import ScenarioError, assemble_network
from .schemas import (
    CompareRequest,
    CompareResponse,
    CompareRowModel,
    ConvergenceRowModel,
    DistributionPointModel,
    FeederDocument,
    FixtureListResponse,
    HealthResponse,
    HistogramBinModel,
    MeanBySpeedModel,
    MetricsModel,
    PhaseReportRequest,
    PhaseReportResponse,
    ScenarioDumpModel,
    ScenarioRequest,
    SimulateRequest,
    SimulateResponse,
    TrialRowModel,
)

VALIDATION_ERRORS = (ScenarioError, FeederError, FragilityError, RiskError)


def resolve_feeder_document(feeder: FeederDocument | str) -> dict:
    if isinstance(feeder, str):
        if feeder.startswith("fixture:"):
            return load_fixture_json(feeder.split(":", 1)[1])
        raise ScenarioError(
            f"feeder reference {feeder!r} must be an inline document or 'fixture:<name>'"
        )
    return feeder.to_feeder_doc()


def build_run(scenario: ScenarioRequest) -> tuple[FeederNetwork, WindProfile]:
    doc = resolve_feeder_document(scenario.feeder)
    net = assemble_network(doc, scenario)
    return net, scenario.profile.to_profile()


def _topology_signature(doc: dict) -> tuple:
    buses = tuple(
        sorted(
            (
                b["id"],
                float(b.get("load_kw", 0.0)),
                bool(b.get("is_critical", False)),
                bool(b.get("is_substation", False)),
            )
            for b in doc["buses"]
        )
    )
    lines = tuple(sorted((l["id"], l["from_bus"], l["to_bus"]) for l in doc["lines"]))
    switches = tuple(
        sorted(
            (
                s["id"],
                s["from_bus"],
                s["to_bus"],
                s.get("kind", "remote"),
                bool(s.get("normally_open", False)),
            )
            for s in doc["switches"]
        )
    )
    return buses, lines, switches


def handle_simulate(request: SimulateRequest) -> SimulateResponse:
    scenario = request.scenario
    net, profile = build_run(scenario)
    result = experiment.simulate(net, profile, scenario)
    trials = [
        TrialRowModel(wind_speed_m_s=b.wind_speed_m_s, trial=r.trial, loss_mwh=r.loss_mwh)
        for b in result.batches
        for r in b.records
    ]
    dumps = None
    if scenario.dump_scenarios:
        dumps = [
            ScenarioDumpModel(
                wind_speed_m_s=b.wind_speed_m_s,
                trial=r.trial,
                failed_lines=sorted(r.failed_lines),
                plan=plan_to_dict(r.plan) if r.plan is not None else None,
            )
            for b in result.batches
            for r in b.records
        ]
    return SimulateResponse(
        metrics=MetricsModel(
            alpha=result.alpha,
            var_mwh=result.metrics.var_mwh,
            cvar_mwh=result.metrics.cvar_mwh,
            config_label=result.config_label,
            profile_label=result.profile_label,
        ),
        distribution=[
            DistributionPointModel(wind_speed_m_s=s, loss_mwh=l, weight=w)
            for s, l, w in result.distribution.points
        ],
        convergence=[
            ConvergenceRowModel(
                wind_speed_m_s=c.wind_speed_m_s,
                converged_at=c.converged_at,
                n_trials=c.n_trials,
                final_mean_mwh=c.final_mean_mwh,
            )
            for c in result.convergence
        ],
        histogram=[
            HistogramBinModel(left_mwh=a, right_mwh=b, weight=w)
            for a, b, w in result.histogram
        ],
        trials=trials,
        dumps=dumps,
    )


def handle_compare(request: CompareRequest) -> CompareResponse:
    scenarios = {"base": request.base, "smart": request.smart, "robust": request.robust}
    docs = {k: resolve_feeder_document(s.feeder) for k, s in scenarios.items()}
    base_sig = _topology_signature(docs["base"])
    for label in ("smart", "robust"):
        if _topology_signature(docs[label]) != base_sig:
            raise ScenarioError(
                f"feeder topology of {label!r} config differs from 'base'; "
                "compare requires identical buses, lines, and switches"
            )
    for field in ("profile", "master_seed", "n_trials", "grid_size", "alpha"):
        values = {label: getattr(s, field) for label, s in scenarios.items()}
        if len({repr(v) for v in values.values()}) != 1:
            raise ScenarioError(f"compare configs disagree on {field!r}: {values}")
    nets = {}
    for label, scenario in scenarios.items():
        net, _ = build_run(scenario)
        if net.config_label != label:
            raise ScenarioError(
                f"config for slot {label!r} is labeled {net.config_label!r}"
            )
        nets[label] = net
    profile = request.base.profile.to_profile()
    result = experiment.compare(nets, profile, request.base)
    mean_rows = [
        MeanBySpeedModel(
            wind_speed_m_s=s,
            base_mwh=result.mean_loss_by_config["base"][i],
            smart_mwh=result.mean_loss_by_config["smart"][i],
            robust_mwh=result.mean_loss_by_config["robust"][i],
        )
        for i, s in enumerate(result.speeds)
    ]
    return CompareResponse(
        alpha=result.alpha,
        profile_label=result.profile_label,
        rows=[
            CompareRowModel(
                config_label=r.config_label,
                var_mwh=r.var_mwh,
                cvar_mwh=r.cvar_mwh,
                improved_over_base=r.improved_over_base,
            )
            for r in result.rows
        ],
        mean_by_speed=mean_rows,
    )


def handle_phase_report(request: PhaseReportRequest) -> PhaseReportResponse:
    net, _profile = build_run(request.scenario)
    stats = experiment.phase_report(net, request.omega_m_s, request.scenario)
    return PhaseReportResponse(
        omega_m_s=stats.omega_m_s,
        n_trials=stats.n_trials,
        config_label=stats.config_label,
        mean_initial_loss_kw=stats.mean_initial_loss_kw,
        mean_assessment_h=stats.mean_assessment_h,
        mean_restored_kw=stats.mean_restored_kw,
    )


app = FastAPI(
    title="gridres",
    description="Feeder resilience simulation and VaR/CVaR risk metrics",
    version="0.1.0",
)


def _translated(fn, *args):
    try:
        return fn(*args)
    except VALIDATION_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok")


@app.get("/fixtures", response_model=FixtureListResponse)
def fixtures() -> FixtureListResponse:
    return FixtureListResponse(fixtures=list_fixtures())


@app.post("/simulate", response_model=SimulateResponse)
def simulate(request: SimulateRequest) -> SimulateResponse:
    return _translated(handle_simulate, request)


@app.post("/compare", response_model=CompareResponse)
def compare(request: CompareRequest) -> CompareResponse:
    return _translated(handle_compare, request)


@app.post("/phase-report", response_model=PhaseReportResponse)
def phase_report(request: PhaseReportRequest) -> PhaseReportResponse:
    return _translated(handle_phase_report, request)
