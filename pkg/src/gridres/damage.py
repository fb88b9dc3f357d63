"""Per-trial component damage sampling and the resulting initial load loss.

Only lines fail; switches, DGs, and buses ride through the event.  Each
trial draws one uniform per line from a counter-based stream keyed by
(master seed, trial index), with the line ordinal fixing the draw
position, so results are bit-identical under any execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feeder import FeederNetwork


@dataclass(frozen=True)
class DamageScenario:
    """Operational state of every line for one Monte Carlo trial."""

    wind_speed_m_s: float
    line_failed: dict[str, bool]
    trial_index: int = 0


def trial_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Deterministic per-trial random stream (Philox keyed by seed and trial)."""
    ss = np.random.SeedSequence(entropy=(int(master_seed), int(trial_index)))
    return np.random.Generator(np.random.Philox(seed=ss))


def derive_child_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit child seed for an indexed sub-experiment (e.g. one
    grid wind speed), keeping paired runs across configurations aligned."""
    ss = np.random.SeedSequence(entropy=(0x9E3779B9, int(master_seed), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_damage_scenario(
    net: FeederNetwork,
    omega: float,
    rng: np.random.Generator,
    trial_index: int = 0,
) -> DamageScenario:
    """Sample per-line failures at wind speed ``omega``.

    A line fails iff its uniform draw is strictly below its failure
    probability; a draw exactly equal to the probability survives.
    """
    p = net.failure_vector(omega)
    r = rng.random(len(net.lines))
    failed = r < p
    return DamageScenario(
        wind_speed_m_s=omega,
        line_failed={l.id: bool(f) for l, f in zip(net.lines, failed)},
        trial_index=trial_index,
    )


def failed_array(net: FeederNetwork, scenario: DamageScenario) -> np.ndarray:
    """Per-line boolean failure array in network line order."""
    missing = [l.id for l in net.lines if l.id not in scenario.line_failed]
    if missing:
        raise ValueError(f"scenario does not cover lines: {missing}")
    return np.array([bool(scenario.line_failed[l.id]) for l in net.lines], dtype=bool)


def initial_load_loss(net: FeederNetwork, scenario: DamageScenario) -> float:
    """Load (kW) cut off from the substation right after the event, with
    every switch at its normal state."""
    line_up = ~failed_array(net, scenario)
    mask = net.energized_mask(line_up, net.normally_closed)
    return float(net.loads_kw[~mask].sum())
