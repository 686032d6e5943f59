"""Shared fixtures: small hand-built scenario documents used across modules."""

import json

import pytest

from meshplan import parse_scenario


def make_doc(**overrides):
    """Minimal valid scenario document; callers override top-level keys."""
    doc = {
        "grid": {
            "rows": 1,
            "cols": 1,
            "cell_size_m": 100,
            "gateway": 0,
        }
    }
    doc.update(overrides)
    return doc


def parse(doc):
    return parse_scenario(json.dumps(doc))


def strip_doc(cells=5, cell_size=100):
    """1 x N strip, all cells outdoor-allowed, gateway at the west end."""
    return make_doc(
        grid={
            "rows": 1,
            "cols": cells,
            "cell_size_m": cell_size,
            "gateway": 0,
            "cells": [{"kind": "both"} for _ in range(cells)],
        }
    )


@pytest.fixture
def minimal_scenario():
    return parse(make_doc())


@pytest.fixture
def gateway_suffices():
    # Single interest cell right next to the gateway, well inside coverage.
    doc = make_doc(
        grid={
            "rows": 1,
            "cols": 2,
            "cell_size_m": 50,
            "gateway": 0,
            "cells": [
                {"kind": "both"},
                {"interest": True, "users": 2, "profile": "web_browsing"},
            ],
        },
        coverage_radius_m=60,
    )
    return parse(doc)


@pytest.fixture
def strip_scenario():
    # Interest at the far end of a 5-cell strip; only an outdoor chain works.
    doc = strip_doc()
    doc["grid"]["cells"][-1]["interest"] = True
    doc["grid"]["cells"][-1]["users"] = 1
    doc["grid"]["cells"][-1]["profile"] = "text_messaging"
    doc["coverage_radius_m"] = 75
    return parse(doc)


def two_iteration_doc():
    """Overloaded at full range, feasible once the range shrinks one step.

    At range 150 the gateway reaches the demand cell directly over 140 m at
    24 Mbit/s, which cannot carry 14 000 kbit/s; at 135 the direct link is
    gone and the two-hop chain runs at 54 Mbit/s per hop.
    """
    return make_doc(
        grid={
            "rows": 1,
            "cols": 3,
            "cell_size_m": 70,
            "gateway": 0,
            "cells": [
                {"kind": "both"},
                {"kind": "both"},
                {
                    "kind": "both",
                    "interest": True,
                    "users": 70,
                    "profile": "video_streaming",
                },
            ],
        },
        environment="built",
        coverage_radius_m=50,
    )


def uncoverable_doc():
    """Interest cell isolated behind placement-forbidden ground."""
    return make_doc(
        grid={
            "rows": 1,
            "cols": 5,
            "cell_size_m": 100,
            "gateway": 0,
            "cells": [
                {"kind": "both"},
                {"placement": False},
                {"placement": False},
                {"placement": False},
                {"interest": True, "placement": False},
            ],
        },
        coverage_radius_m=75,
    )


@pytest.fixture
def two_iteration_scenario():
    return parse(two_iteration_doc())


@pytest.fixture
def uncoverable_scenario():
    return parse(uncoverable_doc())
