"""Independent oracles the tests check the implementation against.

Everything here is deliberately written with different algorithms and data
structures than the package (bus-level BFS instead of block union-find,
raw enumeration instead of zone decomposition, quadrature instead of
closed forms) so agreement is meaningful.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from gridres.damage import DamageScenario
from gridres.feeder import Bus, DistributedGenerator, FeederNetwork, Line, Switch
from gridres.rescurve import ResilienceCurve


# -- curve integration ---------------------------------------------------

def numeric_curve_integral_mwh(curve: ResilienceCurve, points_per_segment: int = 400) -> float:
    """Trapezoid quadrature of the piecewise-linear curve (kWh -> MWh)."""
    ts = [t for t, _ in curve.breakpoints()]
    grid = set(ts)
    for a, b in zip(ts, ts[1:]):
        grid.update(np.linspace(a, b, points_per_segment))
    grid = np.array(sorted(grid))
    values = np.array([curve.loss_at(t) for t in grid])
    return float(np.trapezoid(values, grid)) / 1000.0


# -- weibull facts -------------------------------------------------------

def weibull_cdf(x: np.ndarray, shape: float, scale: float) -> np.ndarray:
    return 1.0 - np.exp(-((np.asarray(x) / scale) ** shape))


def weibull_mean(shape: float, scale: float) -> float:
    return scale * math.gamma(1.0 + 1.0 / shape)


def ks_distance(samples: np.ndarray, cdf) -> float:
    xs = np.sort(samples)
    n = len(xs)
    c = cdf(xs)
    upper = np.max(np.arange(1, n + 1) / n - c)
    lower = np.max(c - np.arange(0, n) / n)
    return float(max(upper, lower))


# -- risk oracles --------------------------------------------------------

def sort_scan_var(losses, weights, alpha: float) -> float:
    """Sort support ascending; scan until cumulative weight reaches alpha."""
    pairs = sorted(zip(losses, weights))
    cum = 0.0
    for loss, w in pairs:
        cum += w
        if cum >= alpha - 1e-12:
            return loss
    return pairs[-1][0]


def split_atom_cvar(losses, weights, alpha: float) -> float:
    """Tail expectation of the worst (1 - alpha) mass, splitting the atom
    that straddles the boundary."""
    pairs = sorted(zip(losses, weights), reverse=True)
    tail = 1.0 - alpha
    remaining = tail
    acc = 0.0
    for loss, w in pairs:
        take = min(w, remaining)
        acc += take * loss
        remaining -= take
        if remaining <= 1e-15:
            break
    return acc / tail


# -- graph oracles -------------------------------------------------------

def bfs_energized(net: FeederNetwork, line_up: dict, switch_closed: dict) -> set[str]:
    """Reachability from the substation by plain BFS on an adjacency map."""
    adj: dict[str, list[str]] = {b.id: [] for b in net.buses}
    for line in net.lines:
        if line_up[line.id]:
            adj[line.from_bus].append(line.to_bus)
            adj[line.to_bus].append(line.from_bus)
    for sw in net.switches:
        if switch_closed[sw.id]:
            adj[sw.from_bus].append(sw.to_bus)
            adj[sw.to_bus].append(sw.from_bus)
    seen = {net.substation_id}
    queue = deque([net.substation_id])
    while queue:
        node = queue.popleft()
        for nb in adj[node]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return seen


def _components(net: FeederNetwork, line_up: dict, switch_closed: dict) -> list[set[str]]:
    adj: dict[str, list[str]] = {b.id: [] for b in net.buses}
    for line in net.lines:
        if line_up[line.id]:
            adj[line.from_bus].append(line.to_bus)
            adj[line.to_bus].append(line.from_bus)
    for sw in net.switches:
        if switch_closed[sw.id]:
            adj[sw.from_bus].append(sw.to_bus)
            adj[sw.to_bus].append(sw.from_bus)
    seen: set[str] = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nb in adj[node]:
                if nb not in comp:
                    comp.add(nb)
                    seen.add(nb)
                    queue.append(nb)
        comps.append(comp)
    return comps


def brute_force_restoration(
    net: FeederNetwork, scenario: DamageScenario, critical_weight: float = 10.0
):
    """Enumerate every switch assignment and score island restoration.

    Feasible assignments keep every initially served bus served.  Islands
    are the substation-free components made entirely of initially dead
    buses holding exactly one grid-forming DG within its capacity.
    Returns (weighted, restored_kw, n_actions) for the best assignment
    under (max weighted, min actions).
    """
    line_up = {lid: not failed for lid, failed in scenario.line_failed.items()}
    normal = {s.id: not s.normally_open for s in net.switches}
    initially_energized = bfs_energized(net, line_up, normal)
    load = {b.id: b.load_kw for b in net.buses}
    weight = {
        b.id: b.load_kw * (critical_weight if b.is_critical else 1.0) for b in net.buses
    }
    gf_dg_bus: dict[str, list] = {}
    for dg in net.dgs:
        if dg.grid_forming:
            gf_dg_bus.setdefault(dg.bus, []).append(dg)

    switch_ids = [s.id for s in net.switches]
    best = None
    for pattern in range(1 << len(switch_ids)):
        closed = {
            sid: bool(pattern & (1 << j)) for j, sid in enumerate(switch_ids)
        }
        energized = bfs_energized(net, line_up, closed)
        if not initially_energized <= energized:
            continue
        restored = 0.0
        weighted = 0.0
        ok = True
        for comp in _components(net, line_up, closed):
            if net.substation_id in comp:
                continue
            if comp & initially_energized:
                # Served buses may only appear in the substation component.
                ok = False
                break
            dgs = [d for b in comp for d in gf_dg_bus.get(b, [])]
            if len(dgs) != 1:
                continue
            total = sum(load[b] for b in comp)
            if total <= 0 or total > dgs[0].capacity_kw:
                continue
            restored += total
            weighted += sum(weight[b] for b in comp)
        if not ok:
            continue
        actions = sum(1 for sid in switch_ids if closed[sid] != normal[sid])
        key = (weighted, -actions)
        if best is None or key > best[0]:
            best = (key, restored)
    (weighted, neg_actions), restored = best
    return weighted, restored, -neg_actions


def check_plan_feasible(net: FeederNetwork, scenario: DamageScenario, plan) -> None:
    """Assert every plan invariant independently; raises AssertionError."""
    line_up = {lid: not failed for lid, failed in scenario.line_failed.items()}
    normal = {s.id: not s.normally_open for s in net.switches}
    initially_energized = bfs_energized(net, line_up, normal)
    final = dict(normal)
    for action in plan.switch_actions:
        sw = net.switches[net.switch_index[action.switch_id]]
        assert action.kind == sw.kind, f"action kind mismatch for {action.switch_id}"
        final[action.switch_id] = action.closed
        assert action.closed != normal[action.switch_id], (
            f"action {action.switch_id} does not change state"
        )
    energized = bfs_energized(net, line_up, final)
    assert initially_energized <= energized, "plan cut off initially served buses"

    comps = _components(net, line_up, final)
    comp_of = {}
    for i, comp in enumerate(comps):
        for b in comp:
            comp_of[b] = i
    load = {b.id: b.load_kw for b in net.buses}
    dg_by_id = {d.id: d for d in net.dgs}
    claimed: set[str] = set()
    total_restored = 0.0
    for dg_id, buses in plan.islands:
        dg = dg_by_id[dg_id]
        assert dg.grid_forming, f"island DG {dg_id} is not grid-forming"
        assert dg.bus in buses, f"island for {dg_id} does not contain its bus"
        comp_ids = {comp_of[b] for b in buses}
        assert len(comp_ids) == 1, f"island for {dg_id} is not connected"
        assert buses == comps[comp_ids.pop()], (
            f"island for {dg_id} is not a full component"
        )
        assert not buses & energized, f"island for {dg_id} touches energized buses"
        assert not buses & initially_energized, (
            f"island for {dg_id} contains initially served buses"
        )
        gf_here = [
            d for d in net.dgs if d.grid_forming and d.bus in buses
        ]
        assert len(gf_here) == 1, f"island for {dg_id} holds {len(gf_here)} grid-forming DGs"
        island_load = sum(load[b] for b in buses)
        assert island_load <= dg.capacity_kw + 1e-9, f"island for {dg_id} over capacity"
        assert not buses & claimed, "islands overlap"
        claimed |= buses
        total_restored += island_load
    assert abs(total_restored - plan.restored_kw) < 1e-9, "restored_kw mismatch"


def plan_weighted_objective(net: FeederNetwork, plan, critical_weight: float = 10.0) -> float:
    weight = {
        b.id: b.load_kw * (critical_weight if b.is_critical else 1.0) for b in net.buses
    }
    return sum(weight[b] for _, buses in plan.islands for b in buses)


# -- random instance generators -------------------------------------------

def random_network(
    rng: np.random.Generator,
    n_buses: int | None = None,
    n_switches: int | None = None,
    label: str = "smart",
) -> FeederNetwork:
    """Random connected feeder: spanning tree of lines, some tree edges
    converted to normally-closed switches, extra normally-open ties, and
    one to three grid-forming DGs."""
    if n_buses is None:
        n_buses = int(rng.integers(6, 18))
    ids = [f"b{i}" for i in range(n_buses)]
    buses = [
        Bus(
            id=ids[i],
            load_kw=float(np.round(rng.uniform(5.0, 200.0), 3)) if i else 0.0,
            is_critical=bool(i and rng.random() < 0.2),
            is_substation=i == 0,
        )
        for i in range(n_buses)
    ]
    tree_edges = []
    for i in range(1, n_buses):
        parent = int(rng.integers(0, i))
        tree_edges.append((ids[parent], ids[i]))
    if n_switches is None:
        n_switches = int(rng.integers(2, 9))
    n_nc = min(int(rng.integers(0, n_switches + 1)), len(tree_edges))
    nc_positions = set(
        rng.choice(len(tree_edges), size=n_nc, replace=False).tolist()
    ) if n_nc else set()
    lines = []
    switches = []
    for k, (a, b) in enumerate(tree_edges):
        if k in nc_positions:
            switches.append(
                Switch(
                    id=f"sw{len(switches)}",
                    from_bus=a,
                    to_bus=b,
                    kind="remote" if rng.random() < 0.7 else "manual",
                    normally_open=False,
                )
            )
        else:
            lines.append(Line(id=f"l{len(lines)}", from_bus=a, to_bus=b))
    while len(switches) < n_switches:
        a, b = rng.choice(n_buses, size=2, replace=False)
        switches.append(
            Switch(
                id=f"sw{len(switches)}",
                from_bus=ids[int(a)],
                to_bus=ids[int(b)],
                kind="remote" if rng.random() < 0.7 else "manual",
                normally_open=True,
            )
        )
    n_dgs = int(rng.integers(1, 4))
    dg_buses = rng.choice(range(1, n_buses), size=min(n_dgs, n_buses - 1), replace=False)
    dgs = [
        DistributedGenerator(
            id=f"dg{k}",
            bus=ids[int(bidx)],
            capacity_kw=float(np.round(rng.uniform(80.0, 600.0), 3)),
            grid_forming=True,
        )
        for k, bidx in enumerate(dg_buses)
    ]
    return FeederNetwork(buses, lines, switches, dgs, config_label=label)


def random_scenario(
    rng: np.random.Generator, net: FeederNetwork, fail_prob: float | None = None
) -> DamageScenario:
    if fail_prob is None:
        fail_prob = float(rng.uniform(0.1, 0.7))
    return DamageScenario(
        wind_speed_m_s=30.0,
        line_failed={l.id: bool(rng.random() < fail_prob) for l in net.lines},
        trial_index=0,
    )
