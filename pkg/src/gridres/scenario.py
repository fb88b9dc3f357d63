"""Scenario configuration: validated settings plus network assembly.

A scenario couples a feeder document with a wind profile, fragility
curves (default, named, and per-line overrides), optional hardening, and
the run settings.  The on-disk config references the feeder by path; the
service request form carries the feeder document inline.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .feeder import FeederNetwork, Line, network_from_document
from .fragility import FragilityCurve, WindProfile, apply_hardening
from .mcengine import TrialParams

DEFAULT_HARDENING_SHIFT_M_S = 15.0


class ScenarioError(ValueError):
    """Scenario configuration that parses but cannot be applied."""


class FragilityCurveSpec(BaseModel):
    p_normal: float = Field(default=0.01, ge=0.0, lt=1.0)
    omega_critical_m_s: float = Field(default=20.0, gt=0.0)
    omega_collapse_m_s: float = Field(default=60.0, gt=0.0)
    interpolation: Literal["linear", "logistic"] = "linear"

    @model_validator(mode="after")
    def _ordered(self) -> "FragilityCurveSpec":
        if self.omega_critical_m_s >= self.omega_collapse_m_s:
            raise ValueError("omega_critical_m_s must be below omega_collapse_m_s")
        return self

    def to_curve(self) -> FragilityCurve:
        return FragilityCurve(
            p_normal=self.p_normal,
            omega_critical_m_s=self.omega_critical_m_s,
            omega_collapse_m_s=self.omega_collapse_m_s,
            interpolation=self.interpolation,
        )


class WindProfileSpec(BaseModel):
    kind: Literal["weibull", "empirical"] = "weibull"
    label: Literal["extreme", "high", "normal", "custom"] = "custom"
    shape: float | None = Field(default=None, gt=0.0)
    scale_m_s: float | None = Field(default=None, gt=0.0)
    bins: list[tuple[float, float]] | None = None

    @model_validator(mode="after")
    def _complete(self) -> "WindProfileSpec":
        if self.kind == "weibull" and (self.shape is None or self.scale_m_s is None):
            raise ValueError("weibull profile requires shape and scale_m_s")
        if self.kind == "empirical" and not self.bins:
            raise ValueError("empirical profile requires bins")
        return self

    def to_profile(self) -> WindProfile:
        if self.kind == "weibull":
            return WindProfile(
                kind="weibull", label=self.label, shape=self.shape, scale_m_s=self.scale_m_s
            )
        return WindProfile(
            kind="empirical", label=self.label, knots=tuple(tuple(b) for b in self.bins)
        )


class FragilitySection(BaseModel):
    default: FragilityCurveSpec = Field(default_factory=FragilityCurveSpec)
    curves: dict[str, FragilityCurveSpec] = Field(default_factory=dict)
    overrides: dict[str, FragilityCurveSpec] = Field(default_factory=dict)


class HardeningSection(BaseModel):
    line_ids: list[str] = Field(default_factory=list)
    shift_m_s: float = Field(default=DEFAULT_HARDENING_SHIFT_M_S, ge=0.0)


class ScenarioBase(BaseModel):
    """Everything about a run except where the feeder comes from."""

    config_label: Literal["base", "smart", "robust"] | None = None
    profile: WindProfileSpec
    fragility: FragilitySection = Field(default_factory=FragilitySection)
    hardening: HardeningSection = Field(default_factory=HardeningSection)
    alpha: float = Field(default=0.95, gt=0.0, lt=1.0)
    n_trials: int = Field(default=1000, ge=1)
    grid_size: int = Field(default=25, ge=1)
    master_seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    event_duration_h: float = Field(default=2.0, gt=0.0)
    da_normal_h: float = Field(default=2.0, gt=0.0)
    smart_da_multiplier: float = Field(default=0.8, gt=0.0)
    critical_weight: float = Field(default=10.0, ge=1.0)
    convergence_tol: float = Field(default=0.01, gt=0.0)
    convergence_window: int = Field(default=100, ge=2)
    histogram_bins: int = Field(default=50, ge=1)
    per_trial_distribution: bool = False
    dump_scenarios: bool = False

    def trial_params(self) -> TrialParams:
        return TrialParams(
            event_duration_h=self.event_duration_h,
            assessment_normal_h=self.da_normal_h,
            smart_assessment_multiplier=self.smart_da_multiplier,
            critical_weight=self.critical_weight,
        )


class ScenarioConfig(ScenarioBase):
    """On-disk configuration; the feeder lives in its own file."""

    feeder_path: str
    out_dir: str | None = None

    @field_validator("feeder_path")
    @classmethod
    def _nonempty(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("feeder_path must not be empty")
        return v


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    """Parse and validate a scenario config file (JSON)."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        fields = ", ".join(
            ".".join(str(loc) for loc in err["loc"]) or "<root>" for err in exc.errors()
        )
        raise ScenarioError(f"invalid config {path}: check field(s) {fields}\n{exc}") from exc


def assemble_network(feeder_doc: dict, scenario: ScenarioBase) -> FeederNetwork:
    """Validate the feeder document and attach resolved fragility curves.

    Per-line resolution order: scenario override by line id, then the named
    curve a line references, then the scenario default.  Hardened lines
    (flagged in the file or listed in the hardening section) get their
    curve shifted by the hardening shift.
    """
    net = network_from_document(feeder_doc)
    if scenario.config_label is not None:
        net = net.with_label(scenario.config_label)
    line_ids = {l.id for l in net.lines}
    unknown = [i for i in scenario.hardening.line_ids if i not in line_ids]
    if unknown:
        raise ScenarioError(f"hardening.line_ids reference unknown lines: {unknown}")
    unknown = [i for i in scenario.fragility.overrides if i not in line_ids]
    if unknown:
        raise ScenarioError(f"fragility.overrides reference unknown lines: {unknown}")
    harden = set(scenario.hardening.line_ids)
    shift = scenario.hardening.shift_m_s
    resolved: list[Line] = []
    for line in net.lines:
        if line.id in scenario.fragility.overrides:
            curve = scenario.fragility.overrides[line.id].to_curve()
        elif line.fragility_ref is not None:
            spec = scenario.fragility.curves.get(line.fragility_ref)
            if spec is None:
                raise ScenarioError(
                    f"line {line.id!r} references fragility curve "
                    f"{line.fragility_ref!r} not defined in fragility.curves"
                )
            curve = spec.to_curve()
        else:
            curve = scenario.fragility.default.to_curve()
        hardened = line.hardened or line.id in harden
        if hardened:
            curve = apply_hardening(curve, shift)
        resolved.append(
            Line(
                id=line.id,
                from_bus=line.from_bus,
                to_bus=line.to_bus,
                fragility_ref=line.fragility_ref,
                fragility=curve,
                hardened=hardened,
            )
        )
    return net.with_lines(resolved)
