"""Candidate-site universe: grid-powered buildings become indoor candidates,
and a reachability sweep from the gateway yields outdoor candidates.

Outdoor candidates need a mast and autonomous power, so the planner treats
them as the expensive kind; which cells even qualify is decided here.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .demand import link_budget, rate_from_rx
from .planner import GATEWAY_ID, Link, link_key
from .propagation import los_clearance, path_loss_db
from .scenario import Scenario, cell_distance, cell_rowcol, link_profile

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateSite:
    """A position that may host a node."""

    id: str
    cell: int
    kind: str  # "indoor" | "outdoor"
    antenna_height: float
    grid_power: bool = False
    power_reliability: float = 1.0
    unit_cost_class: str = ""

    def __post_init__(self) -> None:
        if self.antenna_height <= 0:
            raise ValueError(f"site {self.id}: antenna height must be positive")
        if not self.unit_cost_class:
            object.__setattr__(self, "unit_cost_class", self.kind)


def gateway_site(s: Scenario) -> CandidateSite:
    """The landline node: always present, priced as an indoor node."""
    return CandidateSite(
        id=GATEWAY_ID,
        cell=s.grid.gateway,
        kind="indoor",
        antenna_height=s.mast_height,
        grid_power=True,
        power_reliability=1.0,
    )


def identify_icp(s: Scenario) -> tuple[CandidateSite, ...]:
    """Filter declared buildings into indoor candidates.

    A building qualifies when it has grid power, its supply reliability
    meets the configured threshold, and its cell allows indoor placement;
    exclusions are logged with the failing filter.
    """
    threshold = s.solver.reliability_threshold
    width = len(str(max(len(s.indoor_sites) - 1, 0)))
    result = []
    for idx, building in enumerate(s.indoor_sites):
        label = f"I{idx:0{width}d}"
        if not building.grid_power:
            log.info("%s excluded: no grid power (cell %d)", label, building.cell)
            continue
        if building.power_reliability < threshold:
            log.info(
                "%s excluded: reliability %.3f below threshold %.3f (cell %d)",
                label,
                building.power_reliability,
                threshold,
                building.cell,
            )
            continue
        if not s.grid.cells[building.cell].allows("indoor"):
            log.info("%s excluded: cell %d forbids indoor nodes", label, building.cell)
            continue
        result.append(
            CandidateSite(
                id=label,
                cell=building.cell,
                kind="indoor",
                antenna_height=building.roof_height,
                grid_power=True,
                power_reliability=building.power_reliability,
            )
        )
    return tuple(result)


def generate_ocp(s: Scenario, link_range: float) -> tuple[CandidateSite, ...]:
    """Expand outdoor candidates from the gateway by link range.

    A cell qualifies when it allows outdoor placement and lies within
    link_range of the gateway or of another qualifying cell, so every
    candidate could be wired into a connected backbone. The gateway site
    itself is always first in the result.
    """
    if link_range <= 0:
        raise ValueError(f"link range must be positive, got {link_range}")
    grid = s.grid
    width = len(str(grid.rows * grid.cols - 1))
    reach_rows = int(link_range / grid.cell_size)

    remaining: dict[tuple[int, int], int] = {}
    for i, cell in enumerate(grid.cells):
        if i != grid.gateway and cell.allows("outdoor"):
            remaining[cell_rowcol(grid, i)] = i

    accepted: list[int] = []
    frontier = [cell_rowcol(grid, grid.gateway)]
    while frontier:
        row, col = frontier.pop()
        for r in range(row - reach_rows, row + reach_rows + 1):
            for c in range(col - reach_rows, col + reach_rows + 1):
                idx = remaining.get((r, c))
                if idx is None:
                    continue
                if grid.cell_size * math.hypot(r - row, c - col) <= link_range:
                    del remaining[(r, c)]
                    accepted.append(idx)
                    frontier.append((r, c))

    sites = [gateway_site(s)]
    for idx in sorted(accepted):
        sites.append(
            CandidateSite(
                id=f"O{idx:0{width}d}",
                cell=idx,
                kind="outdoor",
                antenna_height=s.mast_height,
                grid_power=False,
            )
        )
    return tuple(sites)


def feasible_links(
    sites: Sequence[CandidateSite], s: Scenario, link_range: float
) -> tuple[Link, ...]:
    """All usable site pairs: within range, Fresnel-clear, nonzero rate.

    Path loss uses the more lossy of the two endpoint cells' environment
    classes; distances below the model's reference distance are evaluated
    at the reference distance. Output is sorted by id pair.
    """
    radio = s.radio
    env = s.environment
    threshold = env.clearance_fraction
    ordered = sorted(sites, key=lambda site: site.id)
    links = []
    for i, site_a in enumerate(ordered):
        for site_b in ordered[i + 1 :]:
            distance = cell_distance(s.grid, site_a.cell, site_b.cell)
            if distance > link_range:
                continue
            if site_a.cell != site_b.cell:
                profile = link_profile(
                    s.grid,
                    site_a.cell,
                    site_b.cell,
                    site_a.antenna_height,
                    site_b.antenna_height,
                )
                if los_clearance(profile, radio.frequency).worst_fraction < threshold:
                    continue
            worse = env.worse_of(env.class_of(site_a.cell), env.class_of(site_b.cell))
            model = env.model_for(worse)
            loss = path_loss_db(
                model, max(distance, model.reference_distance), radio.frequency
            )
            rate = rate_from_rx(radio, link_budget(radio, loss))
            if rate <= 0:
                continue
            a, b = link_key(site_a.id, site_b.id)
            links.append(Link(a=a, b=b, distance=distance, rate=rate))
    return tuple(sorted(links, key=lambda link: (link.a, link.b)))
