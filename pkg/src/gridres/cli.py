"""Command-line client for the simulation service.

Commands build service requests from local config files, run them against
the in-process handlers (or a remote instance via ``--server``), and write
the returned tables to the output directory.

Exit statuses: 0 success, 1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import json
from pathlib import Path

import click
import httpx
from pydantic import ValidationError

from . import artifacts
from .feeder import FeederError
from .fixtures import load_fixture_json
from .fragility import FragilityError
from .risk import RiskError
from .scenario import ScenarioConfig, ScenarioError, load_scenario_config
from .service import app as service_app
from .service.schemas import (
    CompareRequest,
    CompareResponse,
    FeederDocument,
    PhaseReportRequest,
    PhaseReportResponse,
    ScenarioRequest,
    SimulateRequest,
    SimulateResponse,
)

_VALIDATION = (ScenarioError, FeederError, FragilityError, RiskError, ValidationError)


class ValidationFailure(click.ClickException):
    exit_code = 1


class RuntimeFailure(click.ClickException):
    exit_code = 2


class ServiceClient:
    """Thin client: in-process handler calls, or HTTP when a server URL is set."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def _post(self, path: str, request, response_model):
        if self.server is None:
            handler = {
                "/simulate": service_app.handle_simulate,
                "/compare": service_app.handle_compare,
                "/phase-report": service_app.handle_phase_report,
            }[path]
            return handler(request)
        resp = httpx.post(
            f"{self.server}{path}", json=request.model_dump(mode="json"), timeout=None
        )
        if resp.status_code == 422:
            raise ScenarioError(f"server rejected request: {resp.text}")
        if resp.status_code != 200:
            raise RuntimeError(f"server error {resp.status_code}: {resp.text}")
        return response_model.model_validate(resp.json())

    def simulate(self, request: SimulateRequest) -> SimulateResponse:
        return self._post("/simulate", request, SimulateResponse)

    def compare(self, request: CompareRequest) -> CompareResponse:
        return self._post("/compare", request, CompareResponse)

    def phase_report(self, request: PhaseReportRequest) -> PhaseReportResponse:
        return self._post("/phase-report", request, PhaseReportResponse)


def _load_config(path: str, overrides: dict) -> ScenarioConfig:
    cfg = load_scenario_config(path)
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return cfg
    raw = cfg.model_dump()
    raw.update(updates)
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        fields = ", ".join(
            ".".join(str(p) for p in err["loc"]) or "<root>" for err in exc.errors()
        )
        raise ScenarioError(f"invalid override for field(s) {fields}\n{exc}") from exc


def _feeder_document(cfg: ScenarioConfig, config_path: str) -> FeederDocument:
    ref = cfg.feeder_path
    if ref.startswith("fixture:"):
        doc = load_fixture_json(ref.split(":", 1)[1])
    else:
        path = Path(ref)
        if not path.is_absolute():
            path = Path(config_path).parent / path
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise FeederError(f"cannot read feeder file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise FeederError(f"feeder file {path} is not valid JSON: {exc}") from exc
    return FeederDocument.model_validate(doc)


def _scenario_request(cfg: ScenarioConfig, config_path: str) -> ScenarioRequest:
    doc = _feeder_document(cfg, config_path)
    fields = cfg.model_dump(exclude={"feeder_path", "out_dir"})
    return ScenarioRequest(feeder=doc, **fields)


def _out_dir(flag: str | None, cfg: ScenarioConfig, default: str) -> Path:
    return Path(flag or cfg.out_dir or default)


def _run(fn):
    try:
        return fn()
    except _VALIDATION as exc:
        raise ValidationFailure(str(exc)) from exc
    except click.ClickException:
        raise
    except Exception as exc:  # noqa: BLE001
        raise RuntimeFailure(f"{type(exc).__name__}: {exc}") from exc


def _write_simulate_artifacts(out: Path, resp: SimulateResponse) -> None:
    out.mkdir(parents=True, exist_ok=True)
    artifacts.write_distribution(
        out / artifacts.DISTRIBUTION_FILE,
        [(p.wind_speed_m_s, p.loss_mwh, p.weight) for p in resp.distribution],
    )
    artifacts.write_trials(
        out / artifacts.TRIALS_FILE,
        [(t.wind_speed_m_s, t.trial, t.loss_mwh) for t in resp.trials],
    )
    artifacts.write_metrics(out / artifacts.METRICS_FILE, resp.metrics.model_dump())
    artifacts.write_convergence(
        out / artifacts.CONVERGENCE_FILE,
        [
            (c.wind_speed_m_s, c.converged_at, c.n_trials, c.final_mean_mwh)
            for c in resp.convergence
        ],
    )
    artifacts.write_histogram(
        out / artifacts.HISTOGRAM_FILE,
        [(b.left_mwh, b.right_mwh, b.weight) for b in resp.histogram],
    )
    if resp.dumps is not None:
        artifacts.write_scenario_dump(
            out / artifacts.SCENARIO_DUMP_FILE,
            [d.model_dump() for d in resp.dumps],
        )


_shared_options = [
    click.option("--seed", type=int, default=None, help="Override master_seed"),
    click.option("--trials", type=int, default=None, help="Override n_trials"),
    click.option("--alpha", type=float, default=None, help="Override alpha"),
    click.option("--out", "out_flag", type=click.Path(), default=None, help="Output directory"),
    click.option("--threads", type=int, default=None, help="Worker threads (speed only)"),
    click.option("--server", default=None, help="Remote service URL (default: in-process)"),
]


def _apply_options(fn):
    for opt in reversed(_shared_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Feeder resilience simulation: wind events, losses, VaR/CVaR."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@_apply_options
def simulate(config_path, seed, trials, alpha, out_flag, threads, server):
    """Run one scenario and write its loss distribution and risk metrics."""

    def go():
        overrides = {"master_seed": seed, "n_trials": trials, "alpha": alpha, "threads": threads}
        cfg = _load_config(config_path, overrides)
        request = SimulateRequest(scenario=_scenario_request(cfg, config_path))
        resp = ServiceClient(server).simulate(request)
        out = _out_dir(out_flag, cfg, "gridres-out")
        _write_simulate_artifacts(out, resp)
        m = resp.metrics
        click.echo(
            f"{m.config_label} / {m.profile_label}: "
            f"VaR_{m.alpha:g} = {m.var_mwh:.3f} MWh, CVaR_{m.alpha:g} = {m.cvar_mwh:.3f} MWh"
        )
        click.echo(f"artifacts written to {out}")

    _run(go)


@main.command()
@click.option("--base", "base_path", required=True, type=click.Path(exists=True))
@click.option("--smart", "smart_path", required=True, type=click.Path(exists=True))
@click.option("--robust", "robust_path", required=True, type=click.Path(exists=True))
@_apply_options
def compare(base_path, smart_path, robust_path, seed, trials, alpha, out_flag, threads, server):
    """Paired-seed comparison of base/smart/robust configurations."""

    def go():
        overrides = {"master_seed": seed, "n_trials": trials, "alpha": alpha, "threads": threads}
        cfgs = {
            "base": _load_config(base_path, overrides),
            "smart": _load_config(smart_path, overrides),
            "robust": _load_config(robust_path, overrides),
        }
        paths = {"base": base_path, "smart": smart_path, "robust": robust_path}
        request = CompareRequest(
            **{k: _scenario_request(cfg, paths[k]) for k, cfg in cfgs.items()}
        )
        resp = ServiceClient(server).compare(request)
        out = _out_dir(out_flag, cfgs["base"], "gridres-out")
        out.mkdir(parents=True, exist_ok=True)
        artifacts.write_compare(
            out / artifacts.COMPARE_FILE,
            [
                (r.config_label, r.var_mwh, r.cvar_mwh, r.improved_over_base)
                for r in resp.rows
            ],
        )
        artifacts.write_mean_by_speed(
            out / artifacts.MEAN_BY_SPEED_FILE,
            [row.wind_speed_m_s for row in resp.mean_by_speed],
            {
                "base": [row.base_mwh for row in resp.mean_by_speed],
                "smart": [row.smart_mwh for row in resp.mean_by_speed],
                "robust": [row.robust_mwh for row in resp.mean_by_speed],
            },
        )
        click.echo(f"alpha={resp.alpha:g} profile={resp.profile_label}")
        for r in resp.rows:
            note = "" if r.config_label == "base" else (
                "  [improved]" if r.improved_over_base else "  [NOT improved]"
            )
            click.echo(
                f"  {r.config_label:>7}: VaR = {r.var_mwh:.3f} MWh, "
                f"CVaR = {r.cvar_mwh:.3f} MWh{note}"
            )
        click.echo(f"artifacts written to {out}")

    _run(go)


@main.command(name="phase-report")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--omega", type=float, required=True, help="Wind speed (m/s)")
@_apply_options
def phase_report(config_path, omega, seed, trials, alpha, out_flag, threads, server):
    """Mean per-phase indicators (initial loss, assessment time, restored load)."""

    def go():
        overrides = {"master_seed": seed, "n_trials": trials, "alpha": alpha, "threads": threads}
        cfg = _load_config(config_path, overrides)
        request = PhaseReportRequest(
            scenario=_scenario_request(cfg, config_path), omega_m_s=omega
        )
        resp = ServiceClient(server).phase_report(request)
        out = _out_dir(out_flag, cfg, "gridres-out")
        out.mkdir(parents=True, exist_ok=True)
        artifacts.write_phase_report(out / artifacts.PHASE_REPORT_FILE, resp)
        click.echo(
            f"{resp.config_label} at {resp.omega_m_s:g} m/s over {resp.n_trials} trials:"
        )
        click.echo(f"  mean initial loss : {resp.mean_initial_loss_kw:.2f} kW")
        click.echo(f"  mean assessment   : {resp.mean_assessment_h:.3f} h")
        click.echo(f"  mean restored     : {resp.mean_restored_kw:.2f} kW")
        click.echo(f"artifacts written to {out}")

    _run(go)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(service_app.app, host=host, port=port)


if __name__ == "__main__":
    main()
