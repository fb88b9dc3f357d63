"""Bundled synthetic feeders and scenario configs.

The feeders approximate the topology roles of the standard 37-bus and
123-bus test systems (loads, tie switches, DG placement) without claiming
fidelity to any published parameter set.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def list_fixtures() -> list[str]:
    root = resources.files(__name__)
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str) -> Path:
    if not name.endswith(".json"):
        name = f"{name}.json"
    path = Path(str(resources.files(__name__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(
            f"no bundled fixture {name!r}; available: {list_fixtures()}"
        )
    return path


def load_fixture_json(name: str) -> dict:
    return json.loads(fixture_path(name).read_text())
