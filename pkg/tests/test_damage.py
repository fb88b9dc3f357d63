import numpy as np
import pytest

from gridres.damage import (
    DamageScenario,
    initial_load_loss,
    sample_damage_scenario,
    trial_stream,
)
from gridres.fragility import apply_hardening

from conftest import chain_network, curve, three_bus_radial, with_curves
from oracles import random_network


class _FixedUniform:
    """Stub stream returning a constant; exercises the comparison boundary."""

    def __init__(self, value):
        self.value = value

    def random(self, n):
        return np.full(n, self.value)


class TestSampling:
    def test_no_failures_when_probability_zero(self):
        net = with_curves(chain_network(10), curve(p_normal=0.0))
        scenario = sample_damage_scenario(net, 5.0, trial_stream(1, 0))
        assert not any(scenario.line_failed.values())

    def test_all_fail_above_collapse(self):
        net = with_curves(chain_network(10), curve())
        scenario = sample_damage_scenario(net, 70.0, trial_stream(1, 0))
        assert all(scenario.line_failed.values())

    def test_draw_equal_to_probability_survives(self):
        net = with_curves(chain_network(5), curve(p_normal=0.3, crit=50.0, coll=60.0))
        scenario = sample_damage_scenario(net, 10.0, _FixedUniform(0.3))
        assert not any(scenario.line_failed.values())
        scenario = sample_damage_scenario(net, 10.0, _FixedUniform(0.29999))
        assert all(scenario.line_failed.values())

    def test_binomial_failure_count(self):
        net = with_curves(chain_network(100), curve(p_normal=0.3, crit=50.0, coll=60.0))
        counts = []
        for i in range(10_000):
            scenario = sample_damage_scenario(net, 10.0, trial_stream(77, i))
            counts.append(sum(scenario.line_failed.values()))
        assert 28.5 <= float(np.mean(counts)) <= 31.5

    def test_deterministic_per_trial_stream(self):
        net = with_curves(chain_network(20), curve())
        a = sample_damage_scenario(net, 30.0, trial_stream(5, 3), trial_index=3)
        b = sample_damage_scenario(net, 30.0, trial_stream(5, 3), trial_index=3)
        assert a == b
        c = sample_damage_scenario(net, 30.0, trial_stream(5, 4), trial_index=4)
        assert a.line_failed != c.line_failed

    def test_order_independence_of_trials(self):
        net = with_curves(chain_network(20), curve())
        forward = [
            sample_damage_scenario(net, 30.0, trial_stream(5, i)) for i in range(10)
        ]
        backward = [
            sample_damage_scenario(net, 30.0, trial_stream(5, i))
            for i in reversed(range(10))
        ]
        assert forward == list(reversed(backward))

    def test_hardened_failures_subset_of_base_under_paired_draws(self):
        base = with_curves(chain_network(60), curve())
        hard = with_curves(chain_network(60), apply_hardening(curve(), 15.0))
        for omega in (25.0, 40.0, 55.0, 70.0):
            for i in range(50):
                fb = sample_damage_scenario(base, omega, trial_stream(9, i)).line_failed
                fh = sample_damage_scenario(hard, omega, trial_stream(9, i)).line_failed
                assert all(fb[k] for k in fb if fh[k])


class TestInitialLoadLoss:
    def test_no_failures_no_loss(self):
        net = three_bus_radial()
        scenario = DamageScenario(10.0, {"l1": False, "l2": False})
        assert initial_load_loss(net, scenario) == 0.0

    def test_all_failed_loses_everything(self):
        net = three_bus_radial()
        scenario = DamageScenario(90.0, {"l1": True, "l2": True})
        assert initial_load_loss(net, scenario) == net.total_load_kw

    def test_middle_line_cuts_downstream(self):
        net = three_bus_radial()
        scenario = DamageScenario(30.0, {"l1": False, "l2": True})
        assert initial_load_loss(net, scenario) == 200.0

    def test_bounded_and_monotone_under_extra_damage(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            net = random_network(rng, label="base")
            failed = {l.id: bool(rng.random() < 0.3) for l in net.lines}
            loss = initial_load_loss(net, DamageScenario(30.0, dict(failed)))
            assert 0.0 <= loss <= net.total_load_kw
            intact = [lid for lid, f in failed.items() if not f]
            if intact:
                extra = str(rng.choice(intact))
                worse = initial_load_loss(
                    net, DamageScenario(30.0, {**failed, extra: True})
                )
                assert worse >= loss - 1e-12

    def test_scenario_must_cover_all_lines(self):
        net = three_bus_radial()
        with pytest.raises(ValueError, match="l2"):
            initial_load_loss(net, DamageScenario(10.0, {"l1": True}))
