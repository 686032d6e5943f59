"""Path loss, Fresnel geometry, clearance, and effective range."""

import math

import pytest
from hypothesis import given, strategies as st

from meshplan import (
    ElevationProfile,
    PathLossModel,
    PropagationError,
    effective_range,
    first_fresnel_radius,
    flat_profile,
    free_space_path_loss_db,
    los_clearance,
    mast_height_check,
    path_loss_db,
)
from meshplan.propagation import NO_OBSTRUCTION, lowest_rate
from meshplan.scenario import BUILTIN_RADIOS


def fresnel_oracle(d1, d2, f_mhz):
    lam = 299.792458 / f_mhz
    return math.sqrt(lam * d1 * d2 / (d1 + d2))


def loss_oracle(n, d0, d, f_mhz):
    fspl_d0 = 20 * math.log10(d0 / 1000.0) + 20 * math.log10(f_mhz) + 32.44
    return fspl_d0 + 10 * n * math.log10(d / d0)


def test_free_space_loss_at_100m():
    assert free_space_path_loss_db(100.0, 2400.0) == pytest.approx(80.05, abs=0.01)


def test_path_loss_free_space_matches_friis():
    model = PathLossModel(environment="free_space", exponent=2.0)
    assert path_loss_db(model, 100.0, 2400.0) == pytest.approx(80.05, abs=0.01)


def test_path_loss_built_exponent_three():
    model = PathLossModel(environment="built", exponent=3.0)
    assert path_loss_db(model, 100.0, 2400.0) == pytest.approx(100.05, abs=0.01)


def test_path_loss_at_reference_distance_is_reference_loss():
    model = PathLossModel(
        environment="foliage", exponent=2.7, reference_distance=2.0, reference_loss=46.0
    )
    assert path_loss_db(model, 2.0, 2400.0) == 46.0
    # Omitted reference loss falls back to free-space loss at d0.
    fallback = PathLossModel(environment="foliage", exponent=2.7, reference_distance=2.0)
    assert path_loss_db(fallback, 2.0, 2400.0) == free_space_path_loss_db(2.0, 2400.0)


def test_path_loss_below_reference_distance_rejected():
    model = PathLossModel(environment="free_space", exponent=2.0)
    with pytest.raises(PropagationError):
        path_loss_db(model, 0.5, 2400.0)


def test_model_parameter_validation():
    with pytest.raises(PropagationError):
        PathLossModel(environment="free_space", exponent=1.5)
    with pytest.raises(PropagationError):
        PathLossModel(environment="free_space", exponent=2.0, reference_distance=0.0)


@given(
    d=st.floats(min_value=1.0, max_value=5000.0),
    f=st.floats(min_value=100.0, max_value=6000.0),
    n=st.floats(min_value=2.0, max_value=4.0),
)
def test_path_loss_matches_independent_formula(d, f, n):
    model = PathLossModel(environment="free_space", exponent=n)
    assert path_loss_db(model, d, f) == pytest.approx(loss_oracle(n, 1.0, d, f), rel=1e-9)


@given(
    d1=st.floats(min_value=1.0, max_value=4000.0),
    d2=st.floats(min_value=1.0, max_value=4000.0),
    f=st.floats(min_value=100.0, max_value=6000.0),
    n=st.floats(min_value=2.0, max_value=4.0),
)
def test_path_loss_monotone_in_distance_and_exponent(d1, d2, f, n):
    model = PathLossModel(environment="free_space", exponent=n)
    lo, hi = sorted((d1, d2))
    assert path_loss_db(model, lo, f) <= path_loss_db(model, hi, f) + 1e-9
    if hi > 1.0:
        steeper = PathLossModel(environment="built", exponent=n + 0.5)
        assert path_loss_db(model, hi, f) < path_loss_db(steeper, hi, f)


def test_fresnel_radius_midpoint_2400():
    assert first_fresnel_radius(500.0, 500.0, 2400.0) == pytest.approx(5.59, abs=0.01)


def test_fresnel_radius_midpoint_5800():
    assert first_fresnel_radius(500.0, 500.0, 5800.0) == pytest.approx(3.59, abs=0.01)


def test_fresnel_radius_zero_at_endpoint():
    assert first_fresnel_radius(0.0, 1000.0, 2400.0) == 0.0


@given(
    d1=st.floats(min_value=0.0, max_value=4000.0),
    d2=st.floats(min_value=1.0, max_value=4000.0),
    f=st.floats(min_value=100.0, max_value=6000.0),
)
def test_fresnel_radius_symmetric(d1, d2, f):
    assert first_fresnel_radius(d1, d2, f) == first_fresnel_radius(d2, d1, f)
    assert first_fresnel_radius(d1, d2, f) == pytest.approx(
        fresnel_oracle(d1, d2, f) if d1 + d2 > 0 else 0.0, rel=1e-12
    )


def test_fresnel_radius_maximal_at_midpoint():
    total = 1000.0
    mid = first_fresnel_radius(total / 2, total / 2, 2400.0)
    for d1 in range(0, 1001, 50):
        assert first_fresnel_radius(d1, total - d1, 2400.0) <= mid + 1e-12


def test_profile_validation():
    with pytest.raises(PropagationError):
        ElevationProfile(distances=(0.0,), elevations=(0.0,), height_a=1, height_b=1)
    with pytest.raises(PropagationError):
        ElevationProfile(
            distances=(1.0, 2.0), elevations=(0.0, 0.0), height_a=1, height_b=1
        )
    with pytest.raises(PropagationError):
        ElevationProfile(
            distances=(0.0, 2.0, 1.0),
            elevations=(0.0, 0.0, 0.0),
            height_a=1,
            height_b=1,
        )


def test_clearance_flat_km_ten_meter_masts():
    result = los_clearance(flat_profile(1000.0, 10.0, 10.0), 2400.0)
    assert result.worst_fraction == pytest.approx(1.79, abs=0.01)
    # Worst point of a flat symmetric link is the midpoint sample.
    assert result.blocking_sample == 8


def test_clearance_nine_meter_obstacle_blocks():
    profile = flat_profile(1000.0, 10.0, 10.0)
    elevations = list(profile.elevations)
    elevations[8] = 9.0
    blocked = ElevationProfile(
        distances=profile.distances,
        elevations=tuple(elevations),
        height_a=10.0,
        height_b=10.0,
    )
    result = los_clearance(blocked, 2400.0)
    assert result.worst_fraction == pytest.approx(0.179, abs=0.005)
    assert not result.unobstructed()


def test_clearance_endpoints_only_sentinel():
    profile = ElevationProfile(
        distances=(0.0, 800.0), elevations=(0.0, 0.0), height_a=5.0, height_b=5.0
    )
    result = los_clearance(profile, 2400.0)
    assert result.worst_fraction == NO_OBSTRUCTION
    assert result.blocking_sample is None
    assert result.unobstructed()


def test_mast_height_check_flat_and_blocked():
    flat = flat_profile(1000.0, 0.0, 0.0)
    assert mast_height_check(flat, 10.0, 2400.0)
    assert not mast_height_check(flat, 0.1, 2400.0)

    elevations = list(flat.elevations)
    elevations[8] = 9.0
    blocked = ElevationProfile(
        distances=flat.distances,
        elevations=tuple(elevations),
        height_a=0.0,
        height_b=0.0,
    )
    assert not mast_height_check(blocked, 10.0, 2400.0)


def test_mast_height_check_monotone_in_height():
    flat = flat_profile(600.0, 0.0, 0.0)
    heights = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0]
    results = [mast_height_check(flat, h, 2400.0) for h in heights]
    # Once true it stays true for taller masts.
    assert results == sorted(results)


def test_effective_range_caps_at_radio_limits():
    model = PathLossModel(environment="free_space", exponent=2.0)
    g = BUILTIN_RADIOS["802.11g"]
    n = BUILTIN_RADIOS["802.11n"]
    assert effective_range(model, g, lowest_rate(g)) == pytest.approx(150.0)
    assert effective_range(model, n, lowest_rate(n)) == pytest.approx(250.0)


def test_effective_range_unattainable_rate():
    model = PathLossModel(environment="free_space", exponent=2.0)
    g = BUILTIN_RADIOS["802.11g"]
    with pytest.raises(PropagationError, match="cannot achieve"):
        effective_range(model, g, g.max_rate + 1)


def test_effective_range_monotone_in_rate_and_exponent():
    g = BUILTIN_RADIOS["802.11g"]
    free = PathLossModel(environment="free_space", exponent=2.0)
    built = PathLossModel(environment="built", exponent=3.2)
    rates = [entry[1] for entry in g.rate_table]
    ranges = [effective_range(built, g, rate) for rate in rates]
    assert ranges == sorted(ranges, reverse=True)
    for rate in rates:
        assert effective_range(built, g, rate) <= effective_range(free, g, rate)


def test_builtin_peak_rates():
    assert BUILTIN_RADIOS["802.11g"].max_rate == 54.0
    assert BUILTIN_RADIOS["802.11n"].max_rate == 248.0
