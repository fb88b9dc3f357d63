"""Post-event restoration planning for smart networks.

After a damage scenario de-energizes part of the feeder, a smart network
can operate switches to carve the dead region into intentional islands,
each energized by exactly one grid-forming DG carrying at most its
capacity.  The planner maximizes restored load with critical buses
weighted more heavily, then minimizes the number of switch operations.

The search works on "blocks" (maximal bus groups joined by intact lines;
switches are the only controllable boundaries).  Blocks that stayed
energized never participate: a switch between a live and a dead block is
necessarily a normally-open tie, and closing it cannot increase island
load, so such switches stay open.  The remaining dead blocks split into
independent zones connected by candidate switches; each zone is solved by
exhaustive switch-state enumeration when it has at most ``exact_limit``
candidate switches and by greedy island growth otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .damage import DamageScenario, failed_array
from .feeder import FeederNetwork, _UnionFind

MANUAL_SWITCH_HOURS = 0.5
REMOTE_SWITCH_HOURS = 20.0 / 3600.0

DEFAULT_CRITICAL_WEIGHT = 10.0
EXACT_SEARCH_SWITCH_LIMIT = 12


@dataclass(frozen=True)
class SwitchAction:
    switch_id: str
    closed: bool
    kind: str


@dataclass(frozen=True)
class RestorationPlan:
    """Switch operations plus the DG islands they establish."""

    switch_actions: tuple[SwitchAction, ...] = ()
    islands: tuple[tuple[str, frozenset[str]], ...] = ()
    restored_kw: float = 0.0
    switching_time_h: float = 0.0

    @property
    def is_empty(self) -> bool:
        return not self.switch_actions and not self.islands


EMPTY_PLAN = RestorationPlan()


def switching_time(plan: RestorationPlan) -> float:
    """Total sequential switching time in hours (manual 0.5 h, remote 20 s
    per operation)."""
    total = 0.0
    for action in plan.switch_actions:
        total += MANUAL_SWITCH_HOURS if action.kind == "manual" else REMOTE_SWITCH_HOURS
    return total


def plan_to_dict(plan: RestorationPlan) -> dict:
    """Plain-JSON form of a plan for diagnostic dumps."""
    return {
        "switch_actions": [
            {"switch_id": a.switch_id, "closed": a.closed, "kind": a.kind}
            for a in plan.switch_actions
        ],
        "islands": [
            {"dg": dg, "buses": sorted(buses)} for dg, buses in plan.islands
        ],
        "restored_kw": plan.restored_kw,
        "switching_time_h": plan.switching_time_h,
    }


@dataclass
class _Zone:
    blocks: list[int]
    switches: list[int]  # indices into the candidate-switch table


def plan_restoration(
    net: FeederNetwork,
    scenario: DamageScenario,
    critical_weight: float = DEFAULT_CRITICAL_WEIGHT,
    exact_limit: int = EXACT_SEARCH_SWITCH_LIMIT,
) -> RestorationPlan:
    """Plan islanding restoration for one damage scenario.

    Base and robust networks return the empty plan; restoration is a smart
    capability.  The result is a pure function of the network and the
    failed-line set.
    """
    if net.config_label != "smart" or not net.dgs:
        return EMPTY_PLAN
    failed = failed_array(net, scenario)
    line_up = ~failed
    energized = net.energized_mask(line_up, net.normally_closed)
    if energized.all():
        return EMPTY_PLAN

    n_bus = len(net.buses)
    uf = _UnionFind(n_bus)
    for k, (a, b) in enumerate(net._line_ends):
        if line_up[k]:
            uf.union(a, b)
    block_of = [uf.find(i) for i in range(n_bus)]
    block_ids = sorted(set(block_of))
    block_pos = {root: i for i, root in enumerate(block_ids)}
    n_blocks = len(block_ids)

    block_buses: list[list[int]] = [[] for _ in range(n_blocks)]
    block_load = [0.0] * n_blocks
    block_weighted = [0.0] * n_blocks
    block_dead = [True] * n_blocks
    for i, bus in enumerate(net.buses):
        blk = block_pos[block_of[i]]
        block_buses[blk].append(i)
        block_load[blk] += bus.load_kw
        block_weighted[blk] += bus.load_kw * (critical_weight if bus.is_critical else 1.0)
        if energized[i]:
            block_dead[blk] = False
    block_gf_dgs: list[list[int]] = [[] for _ in range(n_blocks)]
    for d_idx, dg in enumerate(net.dgs):
        if dg.grid_forming:
            block_gf_dgs[block_pos[block_of[net.bus_index[dg.bus]]]].append(d_idx)

    # Candidate switches join two distinct dead blocks; all other switches
    # keep their normal state (live-side operations never add island load).
    cand: list[tuple[int, int, int]] = []  # (switch idx, block a, block b)
    for s_idx, (a, b) in enumerate(net._switch_ends):
        ba, bb = block_pos[block_of[a]], block_pos[block_of[b]]
        if ba != bb and block_dead[ba] and block_dead[bb]:
            cand.append((s_idx, ba, bb))

    zones = _split_zones(n_blocks, block_dead, cand)

    final_closed = {s_idx: bool(net.normally_closed[s_idx]) for s_idx, _, _ in cand}
    islands: list[tuple[str, frozenset[str]]] = []
    restored = 0.0
    for zone in zones:
        if not any(block_gf_dgs[blk] for blk in zone.blocks):
            continue
        if len(zone.switches) <= exact_limit:
            states, zone_islands, zone_kw = _solve_zone_exact(
                net, zone, cand, block_load, block_weighted, block_gf_dgs, block_buses
            )
        else:
            states, zone_islands, zone_kw = _solve_zone_greedy(
                net, zone, cand, block_load, block_weighted, block_gf_dgs, block_buses
            )
        final_closed.update(states)
        islands.extend(zone_islands)
        restored += zone_kw

    actions = []
    for s_idx, closed in final_closed.items():
        sw = net.switches[s_idx]
        if closed != (not sw.normally_open):
            actions.append(SwitchAction(switch_id=sw.id, closed=closed, kind=sw.kind))
    # Sequential order: isolate (open) before energizing (close).
    actions.sort(key=lambda a: (a.closed, a.switch_id))
    plan = RestorationPlan(
        switch_actions=tuple(actions),
        islands=tuple(sorted(islands, key=lambda isl: isl[0])),
        restored_kw=restored,
        switching_time_h=0.0,
    )
    return RestorationPlan(
        switch_actions=plan.switch_actions,
        islands=plan.islands,
        restored_kw=plan.restored_kw,
        switching_time_h=switching_time(plan),
    )


def _split_zones(
    n_blocks: int, block_dead: list[bool], cand: list[tuple[int, int, int]]
) -> list[_Zone]:
    uf = _UnionFind(n_blocks)
    for _, ba, bb in cand:
        uf.union(ba, bb)
    groups: dict[int, _Zone] = {}
    for blk in range(n_blocks):
        if not block_dead[blk]:
            continue
        root = uf.find(blk)
        groups.setdefault(root, _Zone(blocks=[], switches=[])).blocks.append(blk)
    for c_idx, (_, ba, bb) in enumerate(cand):
        groups[uf.find(ba)].switches.append(c_idx)
    return [groups[key] for key in sorted(groups)]


def _islands_for_components(
    net: FeederNetwork,
    comp_blocks: dict[int, list[int]],
    block_load: list[float],
    block_weighted: list[float],
    block_gf_dgs: list[list[int]],
    block_buses: list[list[int]],
) -> tuple[list[tuple[str, frozenset[str]]], float, float]:
    """Score the components of one switch assignment: a component is an
    island iff it holds exactly one grid-forming DG and fits its capacity."""
    islands: list[tuple[str, frozenset[str]]] = []
    restored = 0.0
    weighted = 0.0
    for blocks in comp_blocks.values():
        dgs = [d for blk in blocks for d in block_gf_dgs[blk]]
        if len(dgs) != 1:
            continue
        load = sum(block_load[blk] for blk in blocks)
        if load <= 0 or load > net.dgs[dgs[0]].capacity_kw:
            continue
        buses = frozenset(
            net.buses[i].id for blk in blocks for i in block_buses[blk]
        )
        islands.append((net.dgs[dgs[0]].id, buses))
        restored += load
        weighted += sum(block_weighted[blk] for blk in blocks)
    return islands, restored, weighted


def _solve_zone_exact(
    net: FeederNetwork,
    zone: _Zone,
    cand: list[tuple[int, int, int]],
    block_load: list[float],
    block_weighted: list[float],
    block_gf_dgs: list[list[int]],
    block_buses: list[list[int]],
) -> tuple[dict[int, bool], list[tuple[str, frozenset[str]]], float]:
    sw = [cand[c] for c in zone.switches]
    k = len(sw)
    pos = {blk: i for i, blk in enumerate(zone.blocks)}
    normal = 0
    for j, (s_idx, _, _) in enumerate(sw):
        if net.normally_closed[s_idx]:
            normal |= 1 << j

    best = None  # (weighted, -actions, pattern, islands, restored)
    for pattern in range(1 << k):
        uf = _UnionFind(len(zone.blocks))
        for j, (_, ba, bb) in enumerate(sw):
            if pattern & (1 << j):
                uf.union(pos[ba], pos[bb])
        comps: dict[int, list[int]] = {}
        for blk in zone.blocks:
            comps.setdefault(uf.find(pos[blk]), []).append(blk)
        islands, restored, weighted = _islands_for_components(
            net, comps, block_load, block_weighted, block_gf_dgs, block_buses
        )
        actions = bin(pattern ^ normal).count("1")
        key = (weighted, -actions)
        if best is None or key > best[0]:
            best = (key, pattern, islands, restored)
    _, pattern, islands, restored = best
    states = {
        sw[j][0]: bool(pattern & (1 << j)) for j in range(k)
    }
    return states, islands, restored


def _solve_zone_greedy(
    net: FeederNetwork,
    zone: _Zone,
    cand: list[tuple[int, int, int]],
    block_load: list[float],
    block_weighted: list[float],
    block_gf_dgs: list[list[int]],
    block_buses: list[list[int]],
) -> tuple[dict[int, bool], list[tuple[str, frozenset[str]]], float]:
    """Feasible (not necessarily optimal) island growth for large zones.

    Each grid-forming DG grows an island block by block, always adding the
    adjacent block with the highest weighted load that still fits the DG
    capacity.  Islands claim blocks exclusively."""
    sw = [cand[c] for c in zone.switches]
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for j, (_, ba, bb) in enumerate(sw):
        adjacency.setdefault(ba, []).append((j, bb))
        adjacency.setdefault(bb, []).append((j, ba))

    dg_order = []
    for blk in zone.blocks:
        for d in block_gf_dgs[blk]:
            dg_order.append((-net.dgs[d].capacity_kw, net.dgs[d].id, d, blk))
    dg_order.sort()

    claimed: set[int] = set()
    member_island: dict[int, int] = {}
    islands_blocks: list[tuple[int, list[int]]] = []  # (dg idx, blocks)
    closures: set[int] = set()  # indices into sw
    for _, _, d_idx, home in dg_order:
        if home in claimed or len(block_gf_dgs[home]) > 1:
            continue
        cap = net.dgs[d_idx].capacity_kw
        if block_load[home] > cap:
            continue
        blocks = [home]
        load = block_load[home]
        used: list[int] = []
        in_island = {home}
        while True:
            best = None  # (-weighted, block, switch j)
            for blk in blocks:
                for j, other in adjacency.get(blk, ()):  # noqa: B020
                    if other in in_island or other in claimed or other in member_island:
                        continue
                    if block_gf_dgs[other]:
                        continue
                    if load + block_load[other] > cap:
                        continue
                    key = (-block_weighted[other], other, j)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            _, other, j = best
            blocks.append(other)
            in_island.add(other)
            load += block_load[other]
            used.append(j)
        if load <= 0:
            continue
        claimed.update(blocks)
        for blk in blocks:
            member_island[blk] = len(islands_blocks)
        islands_blocks.append((d_idx, blocks))
        closures.update(used)

    states: dict[int, bool] = {}
    for j, (s_idx, ba, bb) in enumerate(sw):
        if j in closures:
            states[s_idx] = True
        elif member_island.get(ba) != member_island.get(bb) and (
            ba in member_island or bb in member_island
        ):
            states[s_idx] = False  # island boundary must be open
        else:
            states[s_idx] = bool(net.normally_closed[s_idx])

    islands = []
    restored = 0.0
    for d_idx, blocks in islands_blocks:
        buses = frozenset(
            net.buses[i].id for blk in blocks for i in block_buses[blk]
        )
        islands.append((net.dgs[d_idx].id, buses))
        restored += sum(block_load[blk] for blk in blocks)
    return states, islands, restored
