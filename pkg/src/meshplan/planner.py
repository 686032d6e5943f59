"""Node selection, topology construction, channel assignment, and load
evaluation for the gateway-rooted mesh.

The selection objective is lexicographic: fewest outdoor nodes, then fewest
nodes overall, then largest minimum link headroom. The heuristic runs three
stages (weighted greedy cover, connectivity repair, local search); an
exhaustive subset-enumeration oracle covers small instances for testing.
All tie-breaking is by site id, so results are deterministic.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .demand import DemandMap, scenario_demand
from .scenario import Scenario, cell_center_xy, cell_distance, cell_rowcol

if TYPE_CHECKING:
    from .candidates import CandidateSite

GATEWAY_ID = "GW"


class PlanningError(Exception):
    """Base class for planning failures."""


class InfeasibleCoverage(PlanningError):
    """Some interest cell can never be covered by any candidate."""

    def __init__(self, uncovered_cells: Sequence[int]):
        self.uncovered_cells = tuple(uncovered_cells)
        super().__init__(f"uncoverable interest cells: {list(self.uncovered_cells)}")


class DisconnectedSites(PlanningError):
    """Selected sites that no feasible-link path can attach to the gateway."""

    def __init__(self, sites: Sequence[str]):
        self.sites = tuple(sites)
        super().__init__(f"sites unreachable from gateway: {list(self.sites)}")


class OracleTooLarge(PlanningError):
    """Candidate count exceeds the exhaustive-search limit."""


class NotATree(PlanningError):
    """Plan topology is not a spanning tree of the selected sites."""


@dataclass(frozen=True)
class Link:
    """A feasible radio link between two candidate sites (a < b)."""

    a: str
    b: str
    distance: float
    rate: float
    channel: int | None = None
    load: float = 0.0


def link_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PlanMetrics:
    """Node counts, per-link loads, and headroom for one evaluated plan."""

    outdoor_count: int = 0
    indoor_count: int = 0
    gateway_aggregate: float = 0.0
    min_link_headroom: float = math.inf
    residual_conflicts: int = 0
    link_loads: Mapping[tuple[str, str], float] = field(default_factory=dict)
    channel_utilization: Mapping[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class NetworkPlan:
    """Selected sites with a gateway-rooted spanning tree of links."""

    selected: tuple["CandidateSite", ...]
    topology: tuple[Link, ...]
    coverage: Mapping[int, str]
    metrics: PlanMetrics

    def site(self, site_id: str) -> "CandidateSite":
        for s in self.selected:
            if s.id == site_id:
                return s
        raise KeyError(site_id)


# ---------------------------------------------------------------------------
# Coverage


def coverage_sets(
    sites: Iterable["CandidateSite"], s: Scenario
) -> dict[str, frozenset[int]]:
    """Interest cells each site would serve (center distance <= coverage radius)."""
    interest = [i for i, c in enumerate(s.grid.cells) if c.interest]
    result: dict[str, frozenset[int]] = {}
    for site in sites:
        result[site.id] = frozenset(
            i for i in interest if cell_distance(s.grid, site.cell, i) <= s.coverage_radius
        )
    return result


def _count_metrics(sites: Iterable["CandidateSite"]) -> tuple[int, int]:
    outdoor = sum(1 for site in sites if site.kind == "outdoor")
    indoor = sum(1 for site in sites if site.kind == "indoor")
    return outdoor, indoor


# ---------------------------------------------------------------------------
# Graph helpers over candidate sites


def _adjacency(links: Iterable[Link]) -> dict[str, list[tuple[str, Link]]]:
    adj: dict[str, list[tuple[str, Link]]] = {}
    for link in links:
        adj.setdefault(link.a, []).append((link.b, link))
        adj.setdefault(link.b, []).append((link.a, link))
    for neighbors in adj.values():
        neighbors.sort(key=lambda pair: pair[0])
    return adj


def _component(
    members: set[str], adj: Mapping[str, list[tuple[str, Link]]], root: str
) -> set[str]:
    """Members reachable from root via links whose both ends are members."""
    if root not in members:
        return set()
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for v, _ in adj.get(u, ()):
            if v in members and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _cheapest_attach_path(
    source: str,
    targets: set[str],
    selected: set[str],
    sites: Mapping[str, "CandidateSite"],
    adj: Mapping[str, list[tuple[str, Link]]],
) -> list[str] | None:
    """Min-cost path from source to any target over all candidates.

    Cost of entering a node not yet selected is (1, 1) for outdoor and
    (0, 1) for indoor; already-selected nodes cost nothing, so paths reuse
    them freely. Lexicographic (outdoor added, total added) Dijkstra.
    """
    dist: dict[str, tuple[int, int]] = {source: (0, 0)}
    parent: dict[str, str] = {}
    heap: list[tuple[tuple[int, int], str]] = [((0, 0), source)]
    settled: set[str] = set()
    while heap:
        cost, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        if u in targets:
            path = [u]
            while path[-1] != source:
                path.append(parent[path[-1]])
            return path
        for v, _ in adj.get(u, ()):
            if v in settled:
                continue
            if v in selected:
                step = (0, 0)
            elif sites[v].kind == "outdoor":
                step = (1, 1)
            else:
                step = (0, 1)
            candidate = (cost[0] + step[0], cost[1] + step[1])
            if v not in dist or candidate < dist[v]:
                dist[v] = candidate
                parent[v] = u
                heapq.heappush(heap, (candidate, v))
    return None


# ---------------------------------------------------------------------------
# Selection stages


def greedy_cover(
    s: Scenario,
    sites: Mapping[str, "CandidateSite"],
    cover: Mapping[str, frozenset[int]],
    interest: frozenset[int],
) -> set[str]:
    """Weighted greedy set cover seeded with the gateway.

    Gain of a site is the summed dispersion x growth weight of the interest
    cells it newly covers (or the plain count when weighting is off), with
    indoor sites boosted by the configured bias. Ties fall to cell count,
    indoor kind, then smallest id.
    """
    weights = {
        i: s.grid.cells[i].dispersion * s.grid.cells[i].growth for i in interest
    }
    selected = {GATEWAY_ID}
    covered: set[int] = set(cover.get(GATEWAY_ID, frozenset()))
    while not interest <= covered:
        best_id: str | None = None
        best_score: tuple[float, int, int] | None = None
        for sid in sorted(sites):
            if sid in selected:
                continue
            new = cover.get(sid, frozenset()) - covered
            if not new:
                continue
            if s.solver.coverage_weighting:
                gain = sum(weights[i] for i in new)
            else:
                gain = float(len(new))
            if sites[sid].kind == "indoor":
                gain *= s.solver.indoor_bias
            score = (gain, len(new), 1 if sites[sid].kind == "indoor" else 0)
            if best_score is None or score > best_score:
                best_score = score
                best_id = sid
        if best_id is None:
            uncovered = sorted(interest - covered)
            raise InfeasibleCoverage(uncovered)
        selected.add(best_id)
        covered |= cover[best_id]
    return selected


def repair_connectivity(
    selected: set[str],
    sites: Mapping[str, "CandidateSite"],
    adj: Mapping[str, list[tuple[str, Link]]],
) -> set[str]:
    """Attach every selected site to the gateway component, adding relay
    sites along cheapest (outdoor added, total added) paths."""
    selected = set(selected)
    while True:
        component = _component(selected, adj, GATEWAY_ID)
        pending = sorted(selected - component)
        if not pending:
            return selected
        path = _cheapest_attach_path(pending[0], component, selected, sites, adj)
        if path is None:
            raise DisconnectedSites(pending)
        selected |= set(path)


def local_search(
    selected: set[str],
    sites: Mapping[str, "CandidateSite"],
    adj: Mapping[str, list[tuple[str, Link]]],
    cover: Mapping[str, frozenset[int]],
    interest: frozenset[int],
    passes: int,
) -> set[str]:
    """Drop redundant sites and swap outdoor sites for unused indoor ones.

    Each accepted move strictly improves the (outdoor count, total count)
    objective, so the plan never regresses between passes.
    """

    def feasible(candidate: set[str]) -> bool:
        covered: set[int] = set()
        for sid in candidate:
            covered |= cover.get(sid, frozenset())
        if not interest <= covered:
            return False
        return _component(candidate, adj, GATEWAY_ID) == candidate

    selected = set(selected)
    for _ in range(passes):
        changed = False
        removal_order = sorted(
            (sid for sid in selected if sid != GATEWAY_ID),
            key=lambda sid: (0 if sites[sid].kind == "outdoor" else 1, sid),
        )
        for sid in removal_order:
            trial = selected - {sid}
            if feasible(trial):
                selected = trial
                changed = True
        indoor_pool = sorted(
            sid for sid, site in sites.items() if site.kind == "indoor"
        )
        for outdoor_id in sorted(
            sid for sid in selected if sites[sid].kind == "outdoor"
        ):
            if outdoor_id not in selected:
                continue
            for indoor_id in indoor_pool:
                if indoor_id in selected:
                    continue
                trial = (selected - {outdoor_id}) | {indoor_id}
                if feasible(trial):
                    selected = trial
                    changed = True
                    break
        if not changed:
            break
    return selected


def build_topology(
    selected: set[str],
    adj: Mapping[str, list[tuple[str, Link]]],
) -> tuple[Link, ...]:
    """Shortest-path tree from the gateway over the selected sites, path cost
    (hop count, total distance), deterministic parent choice by id."""
    dist: dict[str, tuple[int, float]] = {GATEWAY_ID: (0, 0.0)}
    parent: dict[str, tuple[str, Link]] = {}
    heap: list[tuple[tuple[int, float], str]] = [((0, 0.0), GATEWAY_ID)]
    settled: set[str] = set()
    while heap:
        cost, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        for v, link in adj.get(u, ()):
            if v not in selected or v in settled:
                continue
            candidate = (cost[0] + 1, cost[1] + link.distance)
            if (
                v not in dist
                or candidate < dist[v]
                or (candidate == dist[v] and u < parent[v][0])
            ):
                dist[v] = candidate
                parent[v] = (u, link)
                heapq.heappush(heap, (candidate, v))
    if settled != selected:
        raise DisconnectedSites(sorted(selected - settled))
    links = [parent[v][1] for v in selected if v != GATEWAY_ID]
    return tuple(sorted(links, key=lambda l: (l.a, l.b)))


def _serving_sites(
    s: Scenario, selected: Sequence["CandidateSite"], cells: Iterable[int]
) -> dict[int, str]:
    """Nearest selected site for each cell, ties to the smallest id."""
    result: dict[int, str] = {}
    for i in cells:
        best = min(
            selected, key=lambda site: (cell_distance(s.grid, site.cell, i), site.id)
        )
        result[i] = best.id
    return result


def select_nodes(
    s: Scenario,
    icp: Sequence["CandidateSite"],
    ocp: Sequence["CandidateSite"],
    links: Sequence[Link],
) -> NetworkPlan:
    """Pick sites covering every interest cell and connected to the gateway.

    Raises InfeasibleCoverage when an interest cell is beyond every
    candidate, DisconnectedSites when selected sites cannot reach the
    gateway over feasible links.
    """
    sites: dict[str, "CandidateSite"] = {site.id: site for site in (*icp, *ocp)}
    if GATEWAY_ID not in sites:
        raise PlanningError("candidate set lacks the gateway site")
    adj = _adjacency(links)
    interest = frozenset(i for i, c in enumerate(s.grid.cells) if c.interest)
    cover = coverage_sets(sites.values(), s)

    coverable: set[int] = set()
    for cells in cover.values():
        coverable |= cells
    missing = sorted(interest - coverable)
    if missing:
        raise InfeasibleCoverage(missing)

    # Candidates outside the gateway's link component can never be attached,
    # so selection ignores them. Interest served only by such candidates is a
    # connectivity failure, not a coverage one.
    reachable = _component(set(sites), adj, GATEWAY_ID)
    attachable = {sid: site for sid, site in sites.items() if sid in reachable}
    attachable_cover = {sid: cover[sid] for sid in attachable}
    served: set[int] = set()
    for cells in attachable_cover.values():
        served |= cells
    stranded = interest - served
    if stranded:
        blockers = sorted(
            sid for sid in sites if sid not in reachable and cover[sid] & stranded
        )
        raise DisconnectedSites(blockers)

    selected = greedy_cover(s, attachable, attachable_cover, interest)
    selected = repair_connectivity(selected, attachable, adj)
    selected = local_search(
        selected, attachable, adj, attachable_cover, interest,
        s.solver.local_search_passes,
    )

    chosen = tuple(sites[sid] for sid in sorted(selected))
    topology = build_topology(selected, adj)
    coverage = _serving_sites(s, chosen, sorted(interest))
    outdoor, indoor = _count_metrics(chosen)
    return NetworkPlan(
        selected=chosen,
        topology=topology,
        coverage=coverage,
        metrics=PlanMetrics(outdoor_count=outdoor, indoor_count=indoor),
    )


# ---------------------------------------------------------------------------
# Channel assignment


def build_conflict_graph(
    links: Sequence[Link], s: Scenario, sites: Mapping[str, "CandidateSite"]
) -> list[set[int]]:
    """Adjacency sets over link indices: shared endpoint, or midpoints within
    the interference range (twice the coverage radius unless configured)."""
    interference = s.solver.interference_range
    if interference is None:
        interference = 2.0 * s.coverage_radius
    midpoints = []
    for link in links:
        ax, ay = cell_center_xy(s.grid, sites[link.a].cell)
        bx, by = cell_center_xy(s.grid, sites[link.b].cell)
        midpoints.append(((ax + bx) / 2.0, (ay + by) / 2.0))
    n = len(links)
    adj: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            ends_i = {links[i].a, links[i].b}
            ends_j = {links[j].a, links[j].b}
            if ends_i & ends_j:
                conflict = True
            else:
                (xi, yi), (xj, yj) = midpoints[i], midpoints[j]
                conflict = math.hypot(xi - xj, yi - yj) <= interference
            if conflict:
                adj[i].add(j)
                adj[j].add(i)
    return adj


def greedy_coloring(
    adj: Sequence[set[int]],
    channels: Sequence[int],
    endpoints: Sequence[tuple[str, str]] | None = None,
    radios_per_node: int | None = None,
) -> list[int]:
    """Color links in descending conflict-degree order, minimizing new
    same-channel conflicts at each step.

    When endpoints and radios_per_node are given, a link prefers channels
    that keep each endpoint's distinct-channel count within its radio count,
    falling back to the full set when none qualifies.
    """
    n = len(adj)
    order = sorted(range(n), key=lambda i: (-len(adj[i]), i))
    assignment: dict[int, int] = {}
    used: dict[str, set[int]] = {}
    for i in order:
        allowed = list(channels)
        if endpoints is not None and radios_per_node is not None:
            a, b = endpoints[i]
            used_a = used.setdefault(a, set())
            used_b = used.setdefault(b, set())

            def fits(ch: int) -> bool:
                ok_a = ch in used_a or len(used_a) < radios_per_node
                ok_b = ch in used_b or len(used_b) < radios_per_node
                return ok_a and ok_b

            narrowed = [ch for ch in channels if fits(ch)]
            if narrowed:
                allowed = narrowed
        best = min(
            allowed,
            key=lambda ch: (
                sum(1 for j in adj[i] if assignment.get(j) == ch),
                ch,
            ),
        )
        assignment[i] = best
        if endpoints is not None:
            a, b = endpoints[i]
            used.setdefault(a, set()).add(best)
            used.setdefault(b, set()).add(best)
    return [assignment[i] for i in range(n)]


def count_conflicts(assignment: Sequence[int], adj: Sequence[set[int]]) -> int:
    """Number of conflicting link pairs sharing a channel."""
    total = 0
    for i in range(len(adj)):
        for j in adj[i]:
            if j > i and assignment[i] == assignment[j]:
                total += 1
    return total


def min_conflict_coloring(
    adj: Sequence[set[int]], channels: Sequence[int], limit: int = 12
) -> tuple[list[int], int]:
    """Exhaustive minimum-conflict coloring; exponential, testing-sized only."""
    n = len(adj)
    if n > limit:
        raise OracleTooLarge(f"{n} links exceed coloring oracle limit {limit}")
    best_assignment = [channels[0]] * n
    best_count = count_conflicts(best_assignment, adj)
    if best_count == 0:
        return best_assignment, 0
    for combo in itertools.product(channels, repeat=n):
        count = count_conflicts(combo, adj)
        if count < best_count:
            best_assignment = list(combo)
            best_count = count
            if count == 0:
                break
    return best_assignment, best_count


def assign_channels(
    plan: NetworkPlan,
    s: Scenario,
    channels: Sequence[int] | None = None,
    radios_per_node: int | None = None,
) -> NetworkPlan:
    """Color the link conflict graph; residual conflicts land in metrics."""
    if channels is None:
        channels = s.solver.channels
    if radios_per_node is None:
        radios_per_node = s.solver.radios_per_node
    sites = {site.id: site for site in plan.selected}
    adj = build_conflict_graph(plan.topology, s, sites)
    endpoints = [(link.a, link.b) for link in plan.topology]
    assignment = greedy_coloring(adj, channels, endpoints, radios_per_node)
    residual = count_conflicts(assignment, adj)
    topology = tuple(
        replace(link, channel=assignment[i]) for i, link in enumerate(plan.topology)
    )
    metrics = replace(plan.metrics, residual_conflicts=residual)
    return replace(plan, topology=topology, metrics=metrics)


# ---------------------------------------------------------------------------
# Load evaluation


def evaluate_plan(plan: NetworkPlan, demand: DemandMap, s: Scenario) -> PlanMetrics:
    """Route every cell's demand up the tree and size each link's share.

    Demand attaches to the nearest selected site. A link's capacity is its
    rate (kbit/s) times the utilization factor divided by its collision
    domain size: itself plus conflicting links on the same channel.
    """
    sites = {site.id: site for site in plan.selected}
    links = plan.topology
    if len(links) != len(sites) - 1:
        raise NotATree(
            f"{len(sites)} sites need {len(sites) - 1} tree links, have {len(links)}"
        )
    adj = _adjacency(links)
    parent: dict[str, tuple[str, Link] | None] = {GATEWAY_ID: None}
    order = [GATEWAY_ID]
    for u in order:
        for v, link in adj.get(u, ()):
            if v not in parent:
                parent[v] = (u, link)
                order.append(v)
    if len(order) != len(sites):
        raise NotATree("topology does not connect all selected sites")

    node_load: dict[str, float] = {sid: 0.0 for sid in sites}
    serving = _serving_sites(s, plan.selected, sorted(demand.loads))
    for cell, load in demand.loads.items():
        node_load[serving[cell]] += load

    subtree = dict(node_load)
    link_loads: dict[tuple[str, str], float] = {}
    for v in reversed(order):
        entry = parent[v]
        if entry is None:
            continue
        u, link = entry
        link_loads[link_key(link.a, link.b)] = subtree[v]
        subtree[u] += subtree[v]

    conflict_adj = build_conflict_graph(links, s, sites)
    min_headroom = math.inf
    utilization: dict[int, float] = {}
    for i, link in enumerate(links):
        domain = 1 + sum(
            1 for j in conflict_adj[i] if links[j].channel == link.channel
        )
        capacity = link.rate * 1000.0 * s.solver.utilization_factor / domain
        load = link_loads.get(link_key(link.a, link.b), 0.0)
        min_headroom = min(min_headroom, capacity - load)
        if link.channel is not None:
            share = load / capacity if capacity > 0 else math.inf
            utilization[link.channel] = max(
                utilization.get(link.channel, 0.0), share
            )

    outdoor, indoor = _count_metrics(plan.selected)
    return PlanMetrics(
        outdoor_count=outdoor,
        indoor_count=indoor,
        gateway_aggregate=sum(node_load.values()),
        min_link_headroom=min_headroom,
        residual_conflicts=plan.metrics.residual_conflicts,
        link_loads=link_loads,
        channel_utilization=utilization,
    )


def apply_metrics(plan: NetworkPlan, metrics: PlanMetrics) -> NetworkPlan:
    """Stamp evaluated loads onto the plan's links and attach the metrics."""
    topology = tuple(
        replace(link, load=metrics.link_loads.get(link_key(link.a, link.b), 0.0))
        for link in plan.topology
    )
    return replace(plan, topology=topology, metrics=metrics)


def load_feasible(metrics: PlanMetrics, s: Scenario) -> bool:
    """Every link within capacity, and the gateway backhaul (if capped) too."""
    if metrics.min_link_headroom < 0:
        return False
    capacity = s.solver.gateway_capacity
    return capacity is None or metrics.gateway_aggregate <= capacity


# ---------------------------------------------------------------------------
# Exhaustive oracle


def brute_force_plan(
    s: Scenario,
    icp: Sequence["CandidateSite"],
    ocp: Sequence["CandidateSite"],
    links: Sequence[Link],
) -> NetworkPlan:
    """Enumerate all candidate subsets and return the lexicographic optimum
    (fewest outdoor, fewest total, largest min headroom; ties to the
    smallest sorted id sequence). Exponential; guarded by the oracle limit.
    """
    sites: dict[str, "CandidateSite"] = {site.id: site for site in (*icp, *ocp)}
    if GATEWAY_ID not in sites:
        raise PlanningError("candidate set lacks the gateway site")
    others = sorted(sid for sid in sites if sid != GATEWAY_ID)
    limit = min(s.solver.oracle_limit, 20)
    if len(others) > limit:
        raise OracleTooLarge(f"{len(others)} candidates exceed oracle limit {limit}")

    interest = sorted(i for i, c in enumerate(s.grid.cells) if c.interest)
    cell_bit = {cell: 1 << k for k, cell in enumerate(interest)}
    full_mask = (1 << len(interest)) - 1
    cover = coverage_sets(sites.values(), s)
    cover_mask = {
        sid: sum(cell_bit[c] for c in cells) for sid, cells in cover.items()
    }
    coverable_mask = 0
    for mask in cover_mask.values():
        coverable_mask |= mask
    if coverable_mask != full_mask:
        missing = [c for c in interest if not any(c in cover[sid] for sid in cover)]
        raise InfeasibleCoverage(missing)

    adj = _adjacency(links)
    demand = scenario_demand(s)
    best_key: tuple | None = None
    best_plan: NetworkPlan | None = None
    structurally_feasible = False

    for mask in range(1 << len(others)):
        chosen_ids = [GATEWAY_ID]
        covered = cover_mask[GATEWAY_ID]
        for k, sid in enumerate(others):
            if mask >> k & 1:
                chosen_ids.append(sid)
                covered |= cover_mask[sid]
        if covered != full_mask:
            continue
        member_set = set(chosen_ids)
        if _component(member_set, adj, GATEWAY_ID) != member_set:
            continue
        structurally_feasible = True
        chosen = tuple(sites[sid] for sid in sorted(member_set))
        topology = build_topology(member_set, adj)
        outdoor, indoor = _count_metrics(chosen)
        plan = NetworkPlan(
            selected=chosen,
            topology=topology,
            coverage=_serving_sites(s, chosen, interest),
            metrics=PlanMetrics(outdoor_count=outdoor, indoor_count=indoor),
        )
        plan = assign_channels(plan, s)
        metrics = evaluate_plan(plan, demand, s)
        if not load_feasible(metrics, s):
            continue
        key = (
            metrics.outdoor_count,
            len(chosen),
            -metrics.min_link_headroom,
            tuple(sorted(member_set)),
        )
        if best_key is None or key < best_key:
            best_key = key
            best_plan = apply_metrics(plan, metrics)

    if best_plan is not None:
        return best_plan
    if structurally_feasible:
        raise PlanningError("coverage and connectivity achievable, but no load-feasible subset")
    raise DisconnectedSites(others)


# ---------------------------------------------------------------------------
# Plan serialization (canonical: sorted ids, fixed key order)


def serialize_plan(plan: NetworkPlan, s: Scenario) -> str:
    selected = []
    for site in sorted(plan.selected, key=lambda site: site.id):
        row, col = cell_rowcol(s.grid, site.cell)
        x, y = cell_center_xy(s.grid, site.cell)
        selected.append(
            {
                "id": site.id,
                "cell": site.cell,
                "row": row,
                "col": col,
                "x_m": x,
                "y_m": y,
                "kind": site.kind,
                "antenna_height_m": site.antenna_height,
                "grid_power": site.grid_power,
                "power_reliability": site.power_reliability,
                "unit_cost_class": site.unit_cost_class,
            }
        )
    links = [
        {
            "a": link.a,
            "b": link.b,
            "distance_m": link.distance,
            "rate_mbps": link.rate,
            "channel": link.channel,
            "load_kbps": link.load,
        }
        for link in sorted(plan.topology, key=lambda l: (l.a, l.b))
    ]
    metrics = plan.metrics
    document = {
        "selected": selected,
        "links": links,
        "coverage": {str(cell): plan.coverage[cell] for cell in sorted(plan.coverage)},
        "metrics": {
            "outdoor_count": metrics.outdoor_count,
            "indoor_count": metrics.indoor_count,
            "gateway_aggregate_kbps": metrics.gateway_aggregate,
            "min_link_headroom_kbps": None
            if math.isinf(metrics.min_link_headroom)
            else metrics.min_link_headroom,
            "residual_conflicts": metrics.residual_conflicts,
            "channel_utilization": {
                str(ch): metrics.channel_utilization[ch]
                for ch in sorted(metrics.channel_utilization)
            },
        },
    }
    return json.dumps(document, indent=2) + "\n"


def parse_plan(text: str) -> NetworkPlan:
    """Rebuild a plan from its serialized form (for the export paths)."""
    from .candidates import CandidateSite

    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanningError(f"malformed plan: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise PlanningError("malformed plan: not an object")
    try:
        selected = tuple(
            CandidateSite(
                id=rec["id"],
                cell=rec["cell"],
                kind=rec["kind"],
                antenna_height=rec["antenna_height_m"],
                grid_power=rec["grid_power"],
                power_reliability=rec["power_reliability"],
                unit_cost_class=rec["unit_cost_class"],
            )
            for rec in document["selected"]
        )
        topology = tuple(
            Link(
                a=rec["a"],
                b=rec["b"],
                distance=rec["distance_m"],
                rate=rec["rate_mbps"],
                channel=rec["channel"],
                load=rec["load_kbps"],
            )
            for rec in document["links"]
        )
        coverage = {int(cell): sid for cell, sid in document["coverage"].items()}
        raw_metrics = document["metrics"]
        headroom = raw_metrics["min_link_headroom_kbps"]
        metrics = PlanMetrics(
            outdoor_count=raw_metrics["outdoor_count"],
            indoor_count=raw_metrics["indoor_count"],
            gateway_aggregate=raw_metrics["gateway_aggregate_kbps"],
            min_link_headroom=math.inf if headroom is None else headroom,
            residual_conflicts=raw_metrics["residual_conflicts"],
            link_loads={
                link_key(link.a, link.b): link.load for link in topology
            },
            channel_utilization={
                int(ch): util
                for ch, util in raw_metrics["channel_utilization"].items()
            },
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PlanningError(f"malformed plan: {exc}") from None
    return NetworkPlan(
        selected=selected, topology=topology, coverage=coverage, metrics=metrics
    )
