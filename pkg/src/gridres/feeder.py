"""Distribution feeder model and feeder-file ingestion.

A feeder is a radial network fed from a single substation bus, with
overhead lines (which can fail in a wind event), sectionalizing and tie
switches (which never fail but can be operated), and utility-owned
distributed generators.  Networks are immutable after load and safe to
share across concurrent trials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .fragility import FragilityCurve, failure_probability

CONFIG_LABELS = ("base", "smart", "robust")
SWITCH_KINDS = ("manual", "remote")


class FeederError(ValueError):
    """Base class for feeder file problems."""


class FeederFormatError(FeederError):
    """The file is not parseable as a feeder document."""


class FeederValidationError(FeederError):
    """The document parses but violates a network invariant."""


@dataclass(frozen=True)
class Bus:
    id: str
    load_kw: float = 0.0
    is_critical: bool = False
    is_substation: bool = False


@dataclass(frozen=True)
class Line:
    """Overhead line segment.  ``fragility_ref`` names a curve defined in
    the scenario configuration; ``fragility`` holds the resolved (and
    possibly hardened) curve once a scenario is assembled."""

    id: str
    from_bus: str
    to_bus: str
    fragility_ref: str | None = None
    fragility: FragilityCurve | None = None
    hardened: bool = False


@dataclass(frozen=True)
class Switch:
    id: str
    from_bus: str
    to_bus: str
    kind: str = "remote"
    normally_open: bool = False

    def __post_init__(self) -> None:
        if self.kind not in SWITCH_KINDS:
            raise FeederValidationError(
                f"switch {self.id!r} has unknown kind {self.kind!r}"
            )


@dataclass(frozen=True)
class DistributedGenerator:
    id: str
    bus: str
    capacity_kw: float
    grid_forming: bool = True


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class FeederNetwork:
    """Validated, immutable model of one feeder.

    Component order is the file order; it is part of the deterministic
    random-stream contract (line ordinal = draw position within a trial).
    """

    def __init__(
        self,
        buses: Iterable[Bus],
        lines: Iterable[Line],
        switches: Iterable[Switch],
        dgs: Iterable[DistributedGenerator],
        config_label: str = "base",
    ) -> None:
        self.buses = tuple(buses)
        self.lines = tuple(lines)
        self.switches = tuple(switches)
        self.dgs = tuple(dgs)
        self.config_label = config_label
        self._validate()
        self.bus_index = {b.id: i for i, b in enumerate(self.buses)}
        self.line_index = {l.id: i for i, l in enumerate(self.lines)}
        self.switch_index = {s.id: i for i, s in enumerate(self.switches)}
        self.substation_id = next(b.id for b in self.buses if b.is_substation)
        self.loads_kw = np.array([b.load_kw for b in self.buses])
        self.total_load_kw = float(self.loads_kw.sum())
        self._line_ends = [
            (self.bus_index[l.from_bus], self.bus_index[l.to_bus]) for l in self.lines
        ]
        self._switch_ends = [
            (self.bus_index[s.from_bus], self.bus_index[s.to_bus])
            for s in self.switches
        ]
        self.normally_closed = np.array(
            [not s.normally_open for s in self.switches], dtype=bool
        )
        self._failure_cache: dict[float, np.ndarray] = {}

    # -- validation -----------------------------------------------------

    def _validate(self) -> None:
        if self.config_label not in CONFIG_LABELS:
            raise FeederValidationError(
                f"unknown config label {self.config_label!r}"
            )
        bus_ids = set()
        for b in self.buses:
            if b.id in bus_ids:
                raise FeederValidationError(f"duplicate bus id {b.id!r}")
            bus_ids.add(b.id)
            if b.load_kw < 0:
                raise FeederValidationError(
                    f"bus {b.id!r} has negative load_kw {b.load_kw}"
                )
        subs = [b.id for b in self.buses if b.is_substation]
        if len(subs) != 1:
            raise FeederValidationError(
                f"feeder must have exactly one substation bus, found {subs or 'none'}"
            )
        seen: set[str] = set()
        for kind, items in (("line", self.lines), ("switch", self.switches)):
            for e in items:
                if e.id in seen:
                    raise FeederValidationError(f"duplicate {kind} id {e.id!r}")
                seen.add(e.id)
                for end in (e.from_bus, e.to_bus):
                    if end not in bus_ids:
                        raise FeederValidationError(
                            f"{kind} {e.id!r} references undefined bus {end!r}"
                        )
                if e.from_bus == e.to_bus:
                    raise FeederValidationError(
                        f"{kind} {e.id!r} is a self-loop at bus {e.from_bus!r}"
                    )
        dg_ids = set()
        for d in self.dgs:
            if d.id in dg_ids:
                raise FeederValidationError(f"duplicate dg id {d.id!r}")
            dg_ids.add(d.id)
            if d.bus not in bus_ids:
                raise FeederValidationError(
                    f"dg {d.id!r} references undefined bus {d.bus!r}"
                )
            if d.capacity_kw <= 0:
                raise FeederValidationError(
                    f"dg {d.id!r} capacity_kw must be > 0, got {d.capacity_kw}"
                )
        total = sum(b.load_kw for b in self.buses)
        if total <= 0:
            raise FeederValidationError("total feeder load must be > 0")
        # Base connectivity: intact lines plus normally-closed switches must
        # reach every bus from the substation.
        index = {b.id: i for i, b in enumerate(self.buses)}
        uf = _UnionFind(len(self.buses))
        for l in self.lines:
            uf.union(index[l.from_bus], index[l.to_bus])
        for s in self.switches:
            if not s.normally_open:
                uf.union(index[s.from_bus], index[s.to_bus])
        root = uf.find(index[subs[0]])
        orphans = [b.id for b in self.buses if uf.find(index[b.id]) != root]
        if orphans:
            raise FeederValidationError(
                "buses not connected to the substation in the normal "
                f"configuration: {orphans}"
            )

    # -- derived views --------------------------------------------------

    def with_label(self, config_label: str) -> "FeederNetwork":
        return FeederNetwork(self.buses, self.lines, self.switches, self.dgs, config_label)

    def with_lines(self, lines: Iterable[Line]) -> "FeederNetwork":
        return FeederNetwork(self.buses, lines, self.switches, self.dgs, self.config_label)

    def require_fragility(self) -> None:
        missing = [l.id for l in self.lines if l.fragility is None]
        if missing:
            raise FeederValidationError(
                f"lines without a resolved fragility curve: {missing}"
            )

    def failure_vector(self, omega: float) -> np.ndarray:
        """Per-line failure probabilities at wind speed ``omega`` (cached)."""
        cached = self._failure_cache.get(omega)
        if cached is None:
            self.require_fragility()
            cached = np.array(
                [failure_probability(l.fragility, omega) for l in self.lines]
            )
            self._failure_cache[omega] = cached
        return cached

    # -- reachability ---------------------------------------------------

    def energized_mask(
        self, line_up: np.ndarray, switch_closed: np.ndarray
    ) -> np.ndarray:
        """Boolean per-bus array: reachable from the substation through
        intact lines and closed switches (array order = bus order)."""
        uf = _UnionFind(len(self.buses))
        for k, (a, b) in enumerate(self._line_ends):
            if line_up[k]:
                uf.union(a, b)
        for k, (a, b) in enumerate(self._switch_ends):
            if switch_closed[k]:
                uf.union(a, b)
        root = uf.find(self.bus_index[self.substation_id])
        return np.array([uf.find(i) == root for i in range(len(self.buses))], dtype=bool)

    def line_up_array(self, line_up: Mapping[str, bool]) -> np.ndarray:
        missing = [l.id for l in self.lines if l.id not in line_up]
        if missing:
            raise FeederValidationError(f"line states missing for: {missing}")
        return np.array([bool(line_up[l.id]) for l in self.lines], dtype=bool)

    def switch_closed_array(self, switch_closed: Mapping[str, bool]) -> np.ndarray:
        missing = [s.id for s in self.switches if s.id not in switch_closed]
        if missing:
            raise FeederValidationError(f"switch states missing for: {missing}")
        return np.array([bool(switch_closed[s.id]) for s in self.switches], dtype=bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeederNetwork):
            return NotImplemented
        return (
            self.buses == other.buses
            and self.lines == other.lines
            and self.switches == other.switches
            and self.dgs == other.dgs
            and self.config_label == other.config_label
        )

    def __repr__(self) -> str:
        return (
            f"FeederNetwork({len(self.buses)} buses, {len(self.lines)} lines, "
            f"{len(self.switches)} switches, {len(self.dgs)} dgs, "
            f"label={self.config_label!r})"
        )


def energized_set(
    net: FeederNetwork,
    line_up: Mapping[str, bool],
    switch_closed: Mapping[str, bool],
) -> set[str]:
    """Bus ids reachable from the substation through intact lines and
    closed switches.  The maps must cover every line and switch."""
    mask = net.energized_mask(
        net.line_up_array(line_up), net.switch_closed_array(switch_closed)
    )
    return {b.id for b, on in zip(net.buses, mask) if on}


# -- document I/O -------------------------------------------------------

_BUS_FIELDS = {"id", "load_kw", "is_critical", "is_substation"}
_LINE_FIELDS = {"id", "from_bus", "to_bus", "fragility", "hardened"}
_SWITCH_FIELDS = {"id", "from_bus", "to_bus", "kind", "normally_open"}
_DG_FIELDS = {"id", "bus", "capacity_kw", "grid_forming"}


def _require(entry: dict, keys: tuple[str, ...], kind: str) -> None:
    for key in keys:
        if key not in entry:
            label = entry.get("id", "<missing id>")
            raise FeederFormatError(f"{kind} {label!r} is missing field {key!r}")


def network_from_document(doc: dict) -> FeederNetwork:
    """Build a validated network from a parsed feeder document."""
    if not isinstance(doc, dict):
        raise FeederFormatError("feeder document must be a mapping")
    for key in ("buses", "lines", "switches", "dgs"):
        if key not in doc:
            raise FeederFormatError(f"feeder document is missing key {key!r}")
        if not isinstance(doc[key], list):
            raise FeederFormatError(f"feeder key {key!r} must be a list")
    buses = []
    for entry in doc["buses"]:
        _require(entry, ("id", "load_kw"), "bus")
        buses.append(
            Bus(
                id=str(entry["id"]),
                load_kw=float(entry["load_kw"]),
                is_critical=bool(entry.get("is_critical", False)),
                is_substation=bool(entry.get("is_substation", False)),
            )
        )
    lines = []
    for entry in doc["lines"]:
        _require(entry, ("id", "from_bus", "to_bus"), "line")
        lines.append(
            Line(
                id=str(entry["id"]),
                from_bus=str(entry["from_bus"]),
                to_bus=str(entry["to_bus"]),
                fragility_ref=entry.get("fragility"),
                hardened=bool(entry.get("hardened", False)),
            )
        )
    switches = []
    for entry in doc["switches"]:
        _require(entry, ("id", "from_bus", "to_bus"), "switch")
        switches.append(
            Switch(
                id=str(entry["id"]),
                from_bus=str(entry["from_bus"]),
                to_bus=str(entry["to_bus"]),
                kind=str(entry.get("kind", "remote")),
                normally_open=bool(entry.get("normally_open", False)),
            )
        )
    dgs = []
    for entry in doc["dgs"]:
        _require(entry, ("id", "bus", "capacity_kw"), "dg")
        dgs.append(
            DistributedGenerator(
                id=str(entry["id"]),
                bus=str(entry["bus"]),
                capacity_kw=float(entry["capacity_kw"]),
                grid_forming=bool(entry.get("grid_forming", True)),
            )
        )
    label = str(doc.get("label", "base"))
    return FeederNetwork(buses, lines, switches, dgs, config_label=label)


def network_to_document(net: FeederNetwork) -> dict:
    """Serialize a network back to the feeder document schema."""
    doc: dict = {"label": net.config_label, "buses": [], "lines": [], "switches": [], "dgs": []}
    for b in net.buses:
        doc["buses"].append(
            {
                "id": b.id,
                "load_kw": b.load_kw,
                "is_critical": b.is_critical,
                "is_substation": b.is_substation,
            }
        )
    for l in net.lines:
        entry = {"id": l.id, "from_bus": l.from_bus, "to_bus": l.to_bus, "hardened": l.hardened}
        if l.fragility_ref is not None:
            entry["fragility"] = l.fragility_ref
        doc["lines"].append(entry)
    for s in net.switches:
        doc["switches"].append(
            {
                "id": s.id,
                "from_bus": s.from_bus,
                "to_bus": s.to_bus,
                "kind": s.kind,
                "normally_open": s.normally_open,
            }
        )
    for d in net.dgs:
        doc["dgs"].append(
            {
                "id": d.id,
                "bus": d.bus,
                "capacity_kw": d.capacity_kw,
                "grid_forming": d.grid_forming,
            }
        )
    return doc


def load_feeder(path: str | Path) -> FeederNetwork:
    """Load and validate a feeder file (JSON document, schema above)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FeederFormatError(f"cannot read feeder file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FeederFormatError(f"feeder file {path} is not valid JSON: {exc}") from exc
    return network_from_document(doc)


def save_feeder(net: FeederNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(network_to_document(net), indent=2) + "\n")
