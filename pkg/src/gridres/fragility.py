"""Wind hazard distributions and component fragility curves.

A :class:`WindProfile` describes the regional wind-speed distribution that
events are sampled from, either as a two-parameter Weibull or as an
empirical piecewise-linear density.  A :class:`FragilityCurve` maps wind
speed to the failure probability of a single overhead component; hardening
a component shifts its curve toward higher survivable speeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

PROFILE_LABELS = ("extreme", "high", "normal", "custom")
INTERPOLATIONS = ("linear", "logistic")

# Steepness of the normalized logistic ramp between the two thresholds.
_LOGISTIC_STEEPNESS = 10.0

_EMPIRICAL_MASS_TOL = 1e-6


class FragilityError(ValueError):
    """Invalid wind-profile or fragility-curve parameters."""


@dataclass(frozen=True)
class WindProfile:
    """Wind-speed distribution for a region (speeds in m/s).

    ``kind`` is ``"weibull"`` (fields ``shape``, ``scale_m_s``) or
    ``"empirical"`` (field ``knots``: (speed, density) pairs defining a
    piecewise-linear density).  A single-knot empirical profile is a point
    mass at that speed; its reported density is an indicator rather than a
    true density.
    """

    kind: str
    label: str = "custom"
    shape: float | None = None
    scale_m_s: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.label not in PROFILE_LABELS:
            raise FragilityError(f"unknown profile label {self.label!r}")
        if self.kind == "weibull":
            if self.shape is None or self.scale_m_s is None:
                raise FragilityError("weibull profile requires shape and scale_m_s")
            if self.shape <= 0 or self.scale_m_s <= 0:
                raise FragilityError("weibull shape and scale_m_s must be > 0")
        elif self.kind == "empirical":
            if not self.knots:
                raise FragilityError("empirical profile requires knots")
            knots = tuple((float(s), float(d)) for s, d in self.knots)
            object.__setattr__(self, "knots", knots)
            speeds = [s for s, _ in knots]
            if any(s < 0 for s in speeds):
                raise FragilityError("empirical knot speeds must be >= 0")
            if any(b <= a for a, b in zip(speeds, speeds[1:])):
                raise FragilityError("empirical knot speeds must be strictly increasing")
            if any(d < 0 for _, d in knots):
                raise FragilityError("empirical densities must be >= 0")
            if len(knots) > 1:
                mass = _trapezoid_mass(knots)
                if abs(mass - 1.0) > _EMPIRICAL_MASS_TOL:
                    raise FragilityError(
                        f"empirical density must integrate to 1 (got {mass:.8f})"
                    )
        else:
            raise FragilityError(f"unknown wind profile kind {self.kind!r}")

    @property
    def is_point_mass(self) -> bool:
        return self.kind == "empirical" and len(self.knots or ()) == 1


@dataclass(frozen=True)
class FragilityCurve:
    """Failure probability of one component as a function of wind speed.

    Below ``omega_critical_m_s`` the component fails at its normal-weather
    rate ``p_normal``; at and beyond ``omega_collapse_m_s`` failure is
    certain; in between the probability ramps up monotonically with the
    selected interpolation.
    """

    p_normal: float
    omega_critical_m_s: float
    omega_collapse_m_s: float
    interpolation: str = "linear"

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_normal < 1.0:
            raise FragilityError(f"p_normal must be in [0, 1), got {self.p_normal}")
        if not self.omega_critical_m_s < self.omega_collapse_m_s:
            raise FragilityError(
                "omega_critical_m_s must be below omega_collapse_m_s "
                f"(got {self.omega_critical_m_s} >= {self.omega_collapse_m_s})"
            )
        if self.interpolation not in INTERPOLATIONS:
            raise FragilityError(f"unknown interpolation {self.interpolation!r}")


def _trapezoid_mass(knots: tuple[tuple[float, float], ...]) -> float:
    speeds = np.array([s for s, _ in knots])
    dens = np.array([d for _, d in knots])
    return float(np.trapezoid(dens, speeds))


def wind_density(profile: WindProfile, omega: float) -> float:
    """Probability density of the profile at wind speed ``omega`` (>= 0)."""
    if omega < 0:
        raise FragilityError(f"wind speed must be >= 0, got {omega}")
    if profile.kind == "weibull":
        k = float(profile.shape)
        lam = float(profile.scale_m_s)
        if omega == 0.0:
            if k > 1.0:
                return 0.0
            if k == 1.0:
                return 1.0 / lam
            return math.inf
        z = omega / lam
        return (k / lam) * z ** (k - 1.0) * math.exp(-(z**k))
    knots = profile.knots
    if profile.is_point_mass:
        # Dirac convention: indicator at the atom so grid weighting can
        # concentrate all mass on the matching speed.
        return 1.0 if omega == knots[0][0] else 0.0
    speeds = [s for s, _ in knots]
    dens = [d for _, d in knots]
    if omega < speeds[0] or omega > speeds[-1]:
        return 0.0
    return float(np.interp(omega, speeds, dens))


def wind_cdf(profile: WindProfile, omega: float) -> float:
    """P(wind speed <= omega)."""
    if omega < 0:
        return 0.0
    if profile.kind == "weibull":
        z = omega / float(profile.scale_m_s)
        return 1.0 - math.exp(-(z ** float(profile.shape)))
    if profile.is_point_mass:
        return 1.0 if omega >= profile.knots[0][0] else 0.0
    knots = profile.knots
    if omega <= knots[0][0]:
        return 0.0
    total = 0.0
    for (s0, d0), (s1, d1) in zip(knots, knots[1:]):
        if omega >= s1:
            total += 0.5 * (d0 + d1) * (s1 - s0)
            continue
        if omega > s0:
            dx = omega - s0
            slope = (d1 - d0) / (s1 - s0)
            total += d0 * dx + 0.5 * slope * dx * dx
        break
    return min(total, 1.0)


def wind_quantile(profile: WindProfile, q: float) -> float:
    """Inverse CDF of the profile at probability ``q`` in [0, 1)."""
    if not 0.0 <= q < 1.0:
        raise FragilityError(f"quantile level must be in [0, 1), got {q}")
    if profile.kind == "weibull":
        lam = float(profile.scale_m_s)
        k = float(profile.shape)
        return lam * (-math.log1p(-q)) ** (1.0 / k)
    if profile.is_point_mass:
        return profile.knots[0][0]
    knots = profile.knots
    cum = 0.0
    for (s0, d0), (s1, d1) in zip(knots, knots[1:]):
        seg = 0.5 * (d0 + d1) * (s1 - s0)
        if cum + seg < q:
            cum += seg
            continue
        # Solve d0*x + slope*x^2/2 = q - cum on this segment.
        rem = q - cum
        slope = (d1 - d0) / (s1 - s0)
        if abs(slope) < 1e-300:
            return s0 + (rem / d0 if d0 > 0 else 0.0)
        disc = d0 * d0 + 2.0 * slope * rem
        x = (-d0 + math.sqrt(max(disc, 0.0))) / slope
        return s0 + min(max(x, 0.0), s1 - s0)
    return knots[-1][0]


def sample_wind_speed(
    profile: WindProfile, rng: np.random.Generator, size: int | None = None
) -> float | np.ndarray:
    """Draw wind speed(s) from the profile by inverse-CDF sampling."""
    if size is None:
        return wind_quantile(profile, float(rng.random()))
    u = rng.random(size)
    return np.array([wind_quantile(profile, float(q)) for q in u])


def failure_probability(curve: FragilityCurve, omega: float) -> float:
    """Failure probability of a component at wind speed ``omega`` (>= 0)."""
    if omega < 0:
        raise FragilityError(f"wind speed must be >= 0, got {omega}")
    if omega <= curve.omega_critical_m_s:
        return curve.p_normal
    if omega >= curve.omega_collapse_m_s:
        return 1.0
    x = (omega - curve.omega_critical_m_s) / (
        curve.omega_collapse_m_s - curve.omega_critical_m_s
    )
    if curve.interpolation == "linear":
        ramp = x
    else:
        ramp = _logistic_ramp(x)
    return curve.p_normal + (1.0 - curve.p_normal) * ramp


def _logistic_ramp(x: float) -> float:
    # Logistic in [0, 1] rescaled to hit exactly 0 and 1 at the endpoints.
    k = _LOGISTIC_STEEPNESS
    lo = 1.0 / (1.0 + math.exp(k / 2.0))
    hi = 1.0 / (1.0 + math.exp(-k / 2.0))
    raw = 1.0 / (1.0 + math.exp(-k * (x - 0.5)))
    return (raw - lo) / (hi - lo)


def apply_hardening(curve: FragilityCurve, shift_m_s: float) -> FragilityCurve:
    """Shift both curve thresholds up by ``shift_m_s`` (>= 0).

    The hardened curve is pointwise at or below the original for every
    wind speed; the normal-weather rate is unchanged.
    """
    if shift_m_s < 0:
        raise FragilityError(f"hardening shift must be >= 0, got {shift_m_s}")
    return replace(
        curve,
        omega_critical_m_s=curve.omega_critical_m_s + shift_m_s,
        omega_collapse_m_s=curve.omega_collapse_m_s + shift_m_s,
    )
