"""Pydantic request/response models for the HTTP API.

The request side embeds the feeder document (or names a bundled fixture)
so a service instance needs no local files; the response side mirrors the
tables the CLI writes to disk.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..scenario import ScenarioBase


class FeederBusModel(BaseModel):
    id: str
    load_kw: float = 0.0
    is_critical: bool = False
    is_substation: bool = False


class FeederLineModel(BaseModel):
    id: str
    from_bus: str
    to_bus: str
    fragility: str | None = None
    hardened: bool = False


class FeederSwitchModel(BaseModel):
    id: str
    from_bus: str
    to_bus: str
    kind: str = "remote"
    normally_open: bool = False


class FeederDGModel(BaseModel):
    id: str
    bus: str
    capacity_kw: float
    grid_forming: bool = True


class FeederDocument(BaseModel):
    label: str = "base"
    buses: list[FeederBusModel]
    lines: list[FeederLineModel]
    switches: list[FeederSwitchModel]
    dgs: list[FeederDGModel]

    def to_feeder_doc(self) -> dict:
        return self.model_dump()


class ScenarioRequest(ScenarioBase):
    """One runnable scenario: settings plus the feeder itself.

    ``feeder`` is either an inline document or a ``fixture:<name>``
    reference to a bundled feeder.
    """

    feeder: FeederDocument | str


class SimulateRequest(BaseModel):
    scenario: ScenarioRequest


class CompareRequest(BaseModel):
    base: ScenarioRequest
    smart: ScenarioRequest
    robust: ScenarioRequest


class PhaseReportRequest(BaseModel):
    scenario: ScenarioRequest
    omega_m_s: float = Field(ge=0.0)


class MetricsModel(BaseModel):
    alpha: float
    var_mwh: float
    cvar_mwh: float
    config_label: str
    profile_label: str


class DistributionPointModel(BaseModel):
    wind_speed_m_s: float
    loss_mwh: float
    weight: float


class TrialRowModel(BaseModel):
    wind_speed_m_s: float
    trial: int
    loss_mwh: float


class ConvergenceRowModel(BaseModel):
    wind_speed_m_s: float
    converged_at: int | None
    n_trials: int
    final_mean_mwh: float


class HistogramBinModel(BaseModel):
    left_mwh: float
    right_mwh: float
    weight: float


class ScenarioDumpModel(BaseModel):
    wind_speed_m_s: float
    trial: int
    failed_lines: list[str]
    plan: dict | None = None


class SimulateResponse(BaseModel):
    metrics: MetricsModel
    distribution: list[DistributionPointModel]
    convergence: list[ConvergenceRowModel]
    histogram: list[HistogramBinModel]
    trials: list[TrialRowModel]
    dumps: list[ScenarioDumpModel] | None = None


class CompareRowModel(BaseModel):
    config_label: str
    var_mwh: float
    cvar_mwh: float
    improved_over_base: bool


class MeanBySpeedModel(BaseModel):
    wind_speed_m_s: float
    base_mwh: float
    smart_mwh: float
    robust_mwh: float


class CompareResponse(BaseModel):
    alpha: float
    profile_label: str
    rows: list[CompareRowModel]
    mean_by_speed: list[MeanBySpeedModel]


class PhaseReportResponse(BaseModel):
    omega_m_s: float
    n_trials: int
    config_label: str
    mean_initial_loss_kw: float
    mean_assessment_h: float
    mean_restored_kw: float


class FixtureListResponse(BaseModel):
    fixtures: list[str]


class HealthResponse(BaseModel):
    status: str
