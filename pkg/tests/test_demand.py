"""Demand aggregation, link budget, and margin-to-rate mapping."""

import pytest
from hypothesis import given, strategies as st

from meshplan import (
    DEFAULT_PROFILES,
    AppProfile,
    area_demand,
    link_budget,
    rate_from_rx,
    scenario_demand,
)
from meshplan.demand import DemandError
from meshplan.scenario import BUILTIN_RADIOS, Cell, RadioTechnology

from conftest import make_doc, parse
from scenario_gen import medium_doc


WEB = AppProfile("web_browsing", 100.0, latency_tolerant=True)
VOIP_LOW = AppProfile("voip", 24.0, latency_tolerant=False)


def cell_with_users(users):
    return Cell(users=users, profile="web_browsing")


def test_area_demand_product():
    assert area_demand(cell_with_users(10), WEB) == 1000.0


def test_area_demand_zero_users():
    assert area_demand(cell_with_users(0), WEB) == 0.0


def test_area_demand_voip_low_rate():
    assert area_demand(cell_with_users(5), VOIP_LOW) == 120.0


def test_area_demand_negative_users_rejected():
    with pytest.raises(ValueError):
        area_demand(Cell(users=-1, profile="web_browsing"), WEB)


def test_area_demand_cap_filling_profile_contributes_nothing():
    p2p = next(p for p in DEFAULT_PROFILES if p.cap_filling)
    assert area_demand(cell_with_users(40), p2p) == 0.0


def two_cell_scenario():
    return parse(
        make_doc(
            grid={
                "rows": 1,
                "cols": 3,
                "cell_size_m": 50,
                "gateway": 0,
                "cells": [
                    {},
                    {"users": 10, "profile": "web"},
                    {"users": 5, "profile": "voip"},
                ],
            },
            demand_profiles=[
                {"name": "web", "rate_kbps": 100},
                {"name": "voip", "rate_kbps": 24, "latency_tolerant": False},
            ],
        )
    )


def test_scenario_demand_two_cells():
    demand = scenario_demand(two_cell_scenario())
    assert demand.load(1) == 1000.0
    assert demand.load(2) == 120.0
    assert demand.total == 1120.0


def test_scenario_demand_all_idle():
    demand = scenario_demand(parse(make_doc()))
    assert demand.total == 0.0
    assert demand.load(0) == 0.0


def test_scenario_demand_text_messaging_unit_rate():
    s = parse(
        make_doc(
            grid={
                "rows": 1,
                "cols": 1,
                "cell_size_m": 50,
                "gateway": 0,
                "cells": [{"users": 3, "profile": "text_messaging"}],
            }
        )
    )
    assert scenario_demand(s).total == 3.0


def test_scenario_demand_dangling_profile():
    s = parse(
        make_doc(
            grid={
                "rows": 1,
                "cols": 2,
                "cell_size_m": 50,
                "gateway": 0,
                "cells": [{}, {"users": 2, "profile": "missing"}],
            }
        )
    )
    with pytest.raises(DemandError):
        scenario_demand(s)


@given(seed=st.integers(min_value=0, max_value=2000))
def test_scenario_demand_matches_per_cell_sum(seed):
    s = parse(medium_doc(seed))
    demand = scenario_demand(s)
    expected = 0.0
    for cell in s.grid.cells:
        if cell.users and cell.profile:
            profile = s.profile_named(cell.profile)
            if not profile.cap_filling:
                expected += cell.users * profile.per_user_rate
    assert demand.total == pytest.approx(expected)


def test_link_budget_standard_terms():
    radio = BUILTIN_RADIOS["802.11g"]
    assert link_budget(radio, 80.05) == pytest.approx(-52.05)
    assert link_budget(radio, 0.0) == pytest.approx(28.0)


def test_link_budget_isotropic():
    radio = RadioTechnology(
        name="iso",
        max_range=100.0,
        max_rate=10.0,
        frequency=2400.0,
        tx_power=20.0,
        antenna_gain_tx=0.0,
        antenna_gain_rx=0.0,
        cable_loss=0.0,
        rate_table=((-90.0, 10.0),),
    )
    assert link_budget(radio, 100.0) == pytest.approx(-80.0)


@given(
    loss=st.floats(min_value=0.0, max_value=150.0),
    extra=st.floats(min_value=0.0, max_value=60.0),
)
def test_link_budget_linear_in_loss(loss, extra):
    radio = BUILTIN_RADIOS["802.11g"]
    assert link_budget(radio, loss + extra) == pytest.approx(
        link_budget(radio, loss) - extra
    )


def test_rate_from_rx_table_lookup():
    radio = BUILTIN_RADIOS["802.11g"]
    assert rate_from_rx(radio, -52.05) == 54.0
    assert rate_from_rx(radio, -200.0) == 0.0
    # Thresholds are inclusive: landing exactly on a sensitivity earns it.
    for sensitivity, rate in radio.rate_table:
        assert rate_from_rx(radio, sensitivity) == rate
        assert rate_from_rx(radio, sensitivity - 0.01) < rate


@given(
    rx1=st.floats(min_value=-120.0, max_value=0.0),
    rx2=st.floats(min_value=-120.0, max_value=0.0),
)
def test_rate_from_rx_monotone(rx1, rx2):
    radio = BUILTIN_RADIOS["802.11n"]
    lo, hi = sorted((rx1, rx2))
    assert rate_from_rx(radio, lo) <= rate_from_rx(radio, hi)


def test_rate_from_rx_piecewise_constant_between_breakpoints():
    radio = BUILTIN_RADIOS["802.11g"]
    sensitivities = [entry[0] for entry in radio.rate_table]
    for lo, hi in zip(sensitivities, sensitivities[1:]):
        mid = (lo + hi) / 2.0
        assert rate_from_rx(radio, mid) == rate_from_rx(radio, lo)


def test_default_profiles_cover_common_applications():
    names = {p.name for p in DEFAULT_PROFILES}
    assert {"text_messaging", "web_browsing", "voip", "peer_to_peer"} <= names
    by_name = {p.name: p for p in DEFAULT_PROFILES}
    assert by_name["text_messaging"].per_user_rate == 1.0
    assert by_name["web_browsing"].per_user_rate == 100.0
    assert by_name["peer_to_peer"].cap_filling
