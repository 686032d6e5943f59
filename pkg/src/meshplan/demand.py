"""Application demand profiles, per-cell demand aggregation, and link budget math.

Offered load is modeled as rate-per-user times simultaneous users, summed per
grid cell. The link budget maps a path loss to received power, and the radio
rate table maps received power to the achievable PHY rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .scenario import Cell, RadioTechnology, Scenario


class DemandError(Exception):
    """A demand profile reference could not be resolved."""


@dataclass(frozen=True)
class AppProfile:
    """One application class and its planning throughput per user.

    `per_user_rate` is in kbit/s. Profiles flagged `cap_filling` (bulk
    transfers that soak up whatever capacity is left) contribute no offered
    load and are excluded from feasibility checks.
    """

    name: str
    per_user_rate: float
    latency_tolerant: bool = True
    cap_filling: bool = False


# Planning values: upper bound of each application's published requirement
# range, which compensates for the optimism of the users x rate product.
DEFAULT_PROFILES: tuple[AppProfile, ...] = (
    AppProfile("text_messaging", 1.0, latency_tolerant=True),
    AppProfile("email", 100.0, latency_tolerant=True),
    AppProfile("web_browsing", 100.0, latency_tolerant=True),
    AppProfile("audio_streaming", 160.0, latency_tolerant=False),
    AppProfile("voip", 100.0, latency_tolerant=False),
    AppProfile("video_streaming", 200.0, latency_tolerant=False),
    AppProfile("peer_to_peer", 0.0, latency_tolerant=True, cap_filling=True),
)


@dataclass(frozen=True)
class DemandMap:
    """Offered load per grid cell, kbit/s, for cells with any load."""

    loads: Mapping[int, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return sum(self.loads.values())

    def load(self, cell_index: int) -> float:
        return self.loads.get(cell_index, 0.0)


def area_demand(cell: "Cell", profile: AppProfile) -> float:
    """Offered load of one cell in kbit/s: simultaneous users x per-user rate."""
    if cell.users < 0:
        raise ValueError(f"negative user count {cell.users}")
    if profile.cap_filling:
        return 0.0
    return cell.users * profile.per_user_rate


def scenario_demand(s: "Scenario") -> DemandMap:
    """Aggregate per-cell offered load for a whole scenario.

    Raises DemandError when a cell references an unknown profile.
    """
    loads: dict[int, float] = {}
    for idx, cell in enumerate(s.grid.cells):
        if cell.users == 0:
            continue
        if cell.profile is None:
            raise DemandError(f"cell {idx} has {cell.users} users but no demand profile")
        profile = s.profile_named(cell.profile)
        if profile is None:
            raise DemandError(
                f"cell {idx} references unknown demand profile {cell.profile!r}"
            )
        load = area_demand(cell, profile)
        if load > 0.0:
            loads[idx] = load
    return DemandMap(loads)


def link_budget(radio: "RadioTechnology", loss_db: float) -> float:
    """Received power in dBm for a given path loss."""
    return (
        radio.tx_power
        + radio.antenna_gain_tx
        + radio.antenna_gain_rx
        - radio.cable_loss
        - loss_db
    )


def rate_from_rx(radio: "RadioTechnology", rx_power_dbm: float) -> float:
    """Best PHY rate (Mbit/s) whose sensitivity the received power meets.

    Sensitivity thresholds are inclusive; returns 0.0 when the signal is
    below every entry (no link).
    """
    best = 0.0
    for sensitivity, rate in radio.rate_table:
        if rx_power_dbm >= sensitivity:
            best = rate
        else:
            break
    return best
