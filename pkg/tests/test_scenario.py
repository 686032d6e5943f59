"""Scenario parsing, serialization, geometry, and validation."""

import pytest
from hypothesis import given, strategies as st

from meshplan import (
    ParseError,
    RangeError,
    SchemaError,
    cell_distance,
    link_profile,
    parse_scenario,
    serialize_scenario,
    validate_scenario,
)
from meshplan.scenario import cell_center_xy, cell_index, elevation_at

from conftest import make_doc, parse
from scenario_gen import small_doc, medium_doc


def test_minimal_document_defaults():
    s = parse(make_doc())
    assert s.grid.rows == 1 and s.grid.cols == 1
    assert len(s.grid.cells) == 1
    cell = s.grid.cells[0]
    assert not cell.interest
    assert cell.placement
    assert cell.node_kind_allowed == "both"
    assert cell.dispersion == 1.0 and cell.growth == 1.0
    assert s.radio.name == "802.11g"
    assert s.mast_height == 10.0
    assert s.coverage_radius == s.radio.max_range * 0.5
    assert s.environment.default == "free_space"


def test_radio_by_name_echoes_builtin():
    s = parse(make_doc(radio="802.11n"))
    assert s.radio.max_range == 250.0
    assert s.radio.max_rate == 248.0
    assert s.radio.frequency == 2400.0


def test_radio_object_overrides_builtin_base():
    s = parse(make_doc(radio={"name": "802.11g", "max_range_m": 120.0}))
    assert s.radio.max_range == 120.0
    assert s.radio.max_rate == 54.0


def test_radio_unknown_name_without_fields_rejected():
    with pytest.raises(SchemaError):
        parse(make_doc(radio="802.11zz"))


def test_gateway_out_of_range_rejected():
    doc = make_doc()
    doc["grid"]["gateway"] = 1
    with pytest.raises(RangeError):
        parse(doc)


def test_gateway_rowcol_form():
    doc = make_doc(
        grid={"rows": 2, "cols": 3, "cell_size_m": 50, "gateway": [1, 2]}
    )
    s = parse(doc)
    assert s.grid.gateway == 5


def test_unknown_keys_rejected_everywhere():
    with pytest.raises(SchemaError):
        parse(make_doc(extra=1))
    doc = make_doc()
    doc["grid"]["bogus"] = True
    with pytest.raises(SchemaError):
        parse(doc)
    doc = make_doc(
        grid={"rows": 1, "cols": 1, "cell_size_m": 50, "gateway": 0, "cells": [{"intrest": True}]}
    )
    with pytest.raises(SchemaError):
        parse(doc)


def test_syntax_error_reports_position():
    with pytest.raises(ParseError, match=r"line \d+ column \d+"):
        parse_scenario("{\n  \"grid\": ,\n}")


def test_wrong_type_rejected():
    doc = make_doc()
    doc["grid"]["rows"] = "three"
    with pytest.raises(SchemaError):
        parse(doc)


def test_negative_cell_size_rejected():
    doc = make_doc()
    doc["grid"]["cell_size_m"] = -5
    with pytest.raises(RangeError):
        parse(doc)


def test_cell_count_mismatch_rejected():
    doc = make_doc(
        grid={"rows": 2, "cols": 2, "cell_size_m": 50, "gateway": 0, "cells": [{}]}
    )
    with pytest.raises((SchemaError, RangeError)):
        parse(doc)


def test_environment_shorthand_and_overrides():
    s = parse(make_doc(environment="built"))
    assert s.environment.default == "built"
    doc = make_doc(
        grid={"rows": 1, "cols": 2, "cell_size_m": 50, "gateway": 0},
        environment={"default": "free_space", "overrides": {"1": "foliage"}},
    )
    s = parse(doc)
    assert s.environment.class_of(0) == "free_space"
    assert s.environment.class_of(1) == "foliage"
    assert s.environment.worse_of("free_space", "foliage") == "foliage"
    assert s.environment.worse_of("built", "foliage") == "built"


def test_placement_false_forces_kind_none():
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 2,
            "cell_size_m": 50,
            "gateway": 0,
            "cells": [{}, {"placement": False}],
        }
    )
    s = parse(doc)
    assert s.grid.cells[1].node_kind_allowed == "none"


def test_roundtrip_identity_on_canonical_form():
    doc = make_doc(
        grid={
            "rows": 2,
            "cols": 2,
            "cell_size_m": 75,
            "gateway": 0,
            "cells": [
                {"kind": "both"},
                {"interest": True, "users": 3, "profile": "web_browsing"},
                {"placement": False},
                {"elev_m": 4.5, "d": 1.5, "g": 0.5},
            ],
        },
        radio="802.11n",
        environment={"default": "foliage", "overrides": {"2": "built"}},
        indoor_sites=[{"cell": 0, "roof_height_m": 6.0}],
        mast_height_m=12.0,
    )
    s = parse(doc)
    text = serialize_scenario(s)
    again = parse_scenario(text)
    assert again == s
    assert serialize_scenario(again) == text


@given(seed=st.integers(min_value=0, max_value=10_000))
def test_roundtrip_identity_random_scenarios(seed):
    s = parse(small_doc(seed) if seed % 2 else medium_doc(seed))
    text = serialize_scenario(s)
    assert parse_scenario(text) == s


def test_cell_distance_examples():
    grid = parse(
        make_doc(grid={"rows": 2, "cols": 2, "cell_size_m": 50, "gateway": 0})
    ).grid
    assert cell_distance(grid, 0, 0) == 0.0
    assert cell_distance(grid, 0, 1) == 50.0
    assert cell_distance(grid, 0, 3) == pytest.approx(70.711, abs=1e-3)


def test_cell_distance_out_of_range():
    grid = parse(make_doc()).grid
    with pytest.raises(RangeError):
        cell_distance(grid, 0, 1)


@given(
    data=st.data(),
    rows=st.integers(min_value=1, max_value=8),
    cols=st.integers(min_value=1, max_value=8),
)
def test_cell_distance_metric_properties(data, rows, cols):
    grid = parse(
        make_doc(grid={"rows": rows, "cols": cols, "cell_size_m": 50, "gateway": 0})
    ).grid
    count = rows * cols
    a = data.draw(st.integers(min_value=0, max_value=count - 1))
    b = data.draw(st.integers(min_value=0, max_value=count - 1))
    c = data.draw(st.integers(min_value=0, max_value=count - 1))
    assert cell_distance(grid, a, b) == cell_distance(grid, b, a)
    assert cell_distance(grid, a, b) >= 0.0
    assert (cell_distance(grid, a, b) == 0.0) == (a == b)
    assert cell_distance(grid, a, c) <= (
        cell_distance(grid, a, b) + cell_distance(grid, b, c) + 1e-9
    )


def test_validate_admissible_scenario_empty_report():
    report = validate_scenario(parse(make_doc()))
    assert report.empty
    assert report.violations == ()
    assert report.warnings == ()


def test_validate_names_contradictory_cell():
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 2,
            "cell_size_m": 50,
            "gateway": 0,
            "cells": [{}, {"placement": False, "kind": "indoor"}],
        }
    )
    report = validate_scenario(parse(doc))
    assert len(report.violations) == 1
    assert "cell 1" in report.violations[0]


def test_validate_unreachable_interest_warns():
    # Interest sits 800 m from the only placement-allowed cell; the radio
    # tops out at 150 m, so no candidate could ever cover it.
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 9,
            "cell_size_m": 100,
            "gateway": 0,
            "cells": [{"kind": "both"}]
            + [{"placement": False} for _ in range(7)]
            + [{"interest": True, "placement": False}],
        }
    )
    report = validate_scenario(parse(doc))
    assert not report.empty
    assert any("unreachable interest area" in w for w in report.warnings)


def test_validate_coverage_radius_bound():
    doc = make_doc(coverage_radius_m=200.0)
    report = validate_scenario(parse(doc))
    assert any("coverage" in v for v in report.violations)


def test_validate_indoor_site_on_forbidden_cell():
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 2,
            "cell_size_m": 50,
            "gateway": 0,
            "cells": [{}, {"placement": False}],
        },
        indoor_sites=[{"cell": 1, "roof_height_m": 5.0}],
    )
    report = validate_scenario(parse(doc))
    assert any("indoor site" in v for v in report.violations)


def test_validate_dangling_profile_reference():
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 2,
            "cell_size_m": 50,
            "gateway": 0,
            "cells": [{}, {"users": 2, "profile": "nonexistent"}],
        }
    )
    report = validate_scenario(parse(doc))
    assert any("profile" in v for v in report.violations)


@given(seed=st.integers(min_value=0, max_value=500))
def test_validate_random_generated_scenarios_have_no_violations(seed):
    # Generated documents may carry reachability warnings but never break
    # hard type invariants.
    report = validate_scenario(parse(medium_doc(seed)))
    assert report.violations == ()


def test_elevation_bilinear_interpolation():
    doc = make_doc(
        grid={
            "rows": 2,
            "cols": 2,
            "cell_size_m": 100,
            "gateway": 0,
            "cells": [
                {"elev_m": 0.0},
                {"elev_m": 10.0},
                {"elev_m": 20.0},
                {"elev_m": 30.0},
            ],
        }
    )
    grid = parse(doc).grid
    # Cell centers sit at 50 and 150 on each axis.
    assert elevation_at(grid, 50.0, 50.0) == 0.0
    assert elevation_at(grid, 150.0, 150.0) == 30.0
    assert elevation_at(grid, 100.0, 100.0) == pytest.approx(15.0)
    # Beyond the outermost centers the field clamps to the edge value.
    assert elevation_at(grid, 0.0, 0.0) == 0.0
    assert elevation_at(grid, 199.0, 0.0) == 10.0


def test_link_profile_shape_and_endpoints():
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 5,
            "cell_size_m": 30,
            "gateway": 0,
            "cells": [{"elev_m": float(i)} for i in range(5)],
        }
    )
    grid = parse(doc).grid
    profile = link_profile(grid, 0, 4, height_a=5.0, height_b=7.0)
    assert len(profile.distances) >= 16
    assert profile.distances[0] == 0.0
    assert profile.length == pytest.approx(cell_distance(grid, 0, 4))
    assert profile.elevations[0] == pytest.approx(0.0)
    assert profile.elevations[-1] == pytest.approx(4.0)
    assert profile.height_a == 5.0 and profile.height_b == 7.0
    with pytest.raises(ValueError):
        link_profile(grid, 2, 2, height_a=5.0, height_b=5.0)


def test_cell_geometry_helpers():
    grid = parse(
        make_doc(grid={"rows": 2, "cols": 3, "cell_size_m": 40, "gateway": 0})
    ).grid
    assert cell_index(grid, 1, 2) == 5
    assert cell_center_xy(grid, 0) == (20.0, 20.0)
    assert cell_center_xy(grid, 5) == (100.0, 60.0)


def test_rate_table_monotonicity_enforced():
    doc = make_doc(
        radio={
            "name": "custom",
            "max_range_m": 100,
            "max_rate_mbps": 10,
            "frequency_mhz": 2400,
            "tx_power_dbm": 20,
            "antenna_gain_tx_dbi": 0,
            "antenna_gain_rx_dbi": 0,
            "cable_loss_db": 0,
            "rate_table": [[-90, 10], [-80, 5]],
        }
    )
    report = validate_scenario(parse(doc))
    assert any("rate" in v for v in report.violations)
