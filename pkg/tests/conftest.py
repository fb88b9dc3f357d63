import json

import pytest

from gridres.feeder import (
    Bus,
    DistributedGenerator,
    FeederNetwork,
    Line,
    Switch,
)
from gridres.fixtures import fixture_path, load_fixture_json
from gridres.fragility import FragilityCurve
from gridres.scenario import assemble_network, load_scenario_config

DEFAULT_CURVE = FragilityCurve(
    p_normal=0.01, omega_critical_m_s=20.0, omega_collapse_m_s=60.0
)


def curve(p_normal=0.01, crit=20.0, coll=60.0, interpolation="linear"):
    return FragilityCurve(
        p_normal=p_normal,
        omega_critical_m_s=crit,
        omega_collapse_m_s=coll,
        interpolation=interpolation,
    )


def with_curves(net: FeederNetwork, c: FragilityCurve = DEFAULT_CURVE) -> FeederNetwork:
    lines = [
        Line(
            id=l.id,
            from_bus=l.from_bus,
            to_bus=l.to_bus,
            fragility_ref=l.fragility_ref,
            fragility=c,
            hardened=l.hardened,
        )
        for l in net.lines
    ]
    return net.with_lines(lines)


def three_bus_radial(label="base") -> FeederNetwork:
    """sub -- A -- B with loads 100 / 200 kW."""
    buses = [
        Bus(id="sub", load_kw=0.0, is_substation=True),
        Bus(id="A", load_kw=100.0),
        Bus(id="B", load_kw=200.0),
    ]
    lines = [
        Line(id="l1", from_bus="sub", to_bus="A"),
        Line(id="l2", from_bus="A", to_bus="B"),
    ]
    return with_curves(FeederNetwork(buses, lines, [], [], config_label=label))


def three_bus_document() -> dict:
    return {
        "label": "base",
        "buses": [
            {"id": "sub", "load_kw": 0.0, "is_critical": False, "is_substation": True},
            {"id": "A", "load_kw": 100.0, "is_critical": False, "is_substation": False},
            {"id": "B", "load_kw": 200.0, "is_critical": False, "is_substation": False},
        ],
        "lines": [
            {"id": "l1", "from_bus": "sub", "to_bus": "A", "hardened": False},
            {"id": "l2", "from_bus": "A", "to_bus": "B", "hardened": False},
        ],
        "switches": [],
        "dgs": [],
    }


def chain_network(n_lines: int, load_kw: float = 10.0, label="base") -> FeederNetwork:
    """sub -- b1 -- b2 -- ... with one load per bus."""
    buses = [Bus(id="sub", load_kw=0.0, is_substation=True)]
    lines = []
    prev = "sub"
    for i in range(1, n_lines + 1):
        bid = f"b{i}"
        buses.append(Bus(id=bid, load_kw=load_kw))
        lines.append(Line(id=f"l{i}", from_bus=prev, to_bus=bid))
        prev = bid
    return with_curves(FeederNetwork(buses, lines, [], [], config_label=label))


def fixture_network(feeder: str, config: str) -> FeederNetwork:
    cfg = load_scenario_config(fixture_path(config))
    return assemble_network(load_fixture_json(feeder), cfg)


@pytest.fixture(scope="session")
def net_123_base():
    return fixture_network("feeder_123.json", "config_123_base.json")


@pytest.fixture(scope="session")
def net_123_smart():
    return fixture_network("feeder_123.json", "config_123_smart.json")


@pytest.fixture(scope="session")
def net_123_robust():
    return fixture_network("feeder_123.json", "config_123_robust.json")


@pytest.fixture(scope="session")
def net_37_base():
    return fixture_network("feeder_37.json", "config_37_base.json")


@pytest.fixture(scope="session")
def net_37_smart():
    return fixture_network("feeder_37.json", "config_37_smart.json")


@pytest.fixture(scope="session")
def net_37_robust():
    return fixture_network("feeder_37.json", "config_37_robust.json")


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2))
    return path
