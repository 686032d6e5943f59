"""RF feasibility primitives: log-distance path loss, Fresnel geometry, and
line-of-sight clearance over an elevation profile.

Three outdoor environment classes are modeled (free space, foliage, built-up)
as log-distance models anchored at the free-space loss of a short reference
distance. Earth curvature is ignored; links here are at most a few km.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .demand import link_budget, rate_from_rx

SPEED_OF_LIGHT_M_MHZ = 299.792458  # wavelength in meters = this / frequency in MHz

ENVIRONMENT_CLASSES = ("free_space", "foliage", "built")

# Standard outdoor 2.4 GHz engineering exponents; overridable per scenario.
DEFAULT_EXPONENTS = {"free_space": 2.0, "foliage": 2.7, "built": 3.2}

# Conventional "no significant obstruction" rule: 60% of the first Fresnel
# zone must be clear.
DEFAULT_CLEARANCE_FRACTION = 0.6

# Worst-fraction sentinel for profiles with no interior sample to obstruct.
NO_OBSTRUCTION = 1e9


class PropagationError(ValueError):
    """Inputs outside a model's domain of validity."""


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance attenuation: reference loss at d0 plus 10·n·log10(d/d0).

    When `reference_loss` is None it is taken as the free-space loss at the
    reference distance for the frequency under evaluation.
    """

    environment: str = "free_space"
    exponent: float = 2.0
    reference_distance: float = 1.0
    reference_loss: float | None = None

    def __post_init__(self) -> None:
        if self.exponent < 2.0:
            raise PropagationError(f"path loss exponent {self.exponent} < 2.0")
        if self.reference_distance <= 0.0:
            raise PropagationError("reference distance must be positive")


def free_space_path_loss_db(distance_m: float, frequency_mhz: float) -> float:
    """Free-space loss, 20·log10(d_km) + 20·log10(f_MHz) + 32.44."""
    if distance_m <= 0.0 or frequency_mhz <= 0.0:
        raise PropagationError("distance and frequency must be positive")
    return 20.0 * math.log10(distance_m / 1000.0) + 20.0 * math.log10(frequency_mhz) + 32.44


def path_loss_db(model: PathLossModel, distance_m: float, frequency_mhz: float) -> float:
    """Path loss in dB at `distance_m`; invalid below the reference distance."""
    if frequency_mhz <= 0.0:
        raise PropagationError("frequency must be positive")
    if distance_m < model.reference_distance:
        raise PropagationError(
            f"distance {distance_m} m below reference distance {model.reference_distance} m"
        )
    ref = model.reference_loss
    if ref is None:
        ref = free_space_path_loss_db(model.reference_distance, frequency_mhz)
    return ref + 10.0 * model.exponent * math.log10(distance_m / model.reference_distance)


def first_fresnel_radius(d1_m: float, d2_m: float, frequency_mhz: float) -> float:
    """First Fresnel zone radius at a point d1 from one end, d2 from the other."""
    if d1_m < 0.0 or d2_m < 0.0 or d1_m + d2_m <= 0.0:
        raise PropagationError("segment distances must be nonnegative with positive total")
    if frequency_mhz <= 0.0:
        raise PropagationError("frequency must be positive")
    wavelength = SPEED_OF_LIGHT_M_MHZ / frequency_mhz
    # The product is grouped so the result is bit-identical under argument swap.
    return math.sqrt(wavelength * (d1_m * d2_m) / (d1_m + d2_m))


@dataclass(frozen=True)
class ElevationProfile:
    """Ground elevations sampled along a link, plus antenna heights above ground."""

    distances: tuple[float, ...]
    elevations: tuple[float, ...]
    height_a: float
    height_b: float

    def __post_init__(self) -> None:
        if len(self.distances) != len(self.elevations):
            raise PropagationError("distances and elevations differ in length")
        if len(self.distances) < 2:
            raise PropagationError("profile needs at least two samples")
        if self.distances[0] != 0.0:
            raise PropagationError("profile must start at distance 0")
        if any(b <= a for a, b in zip(self.distances, self.distances[1:])):
            raise PropagationError("profile distances must be strictly increasing")

    @property
    def length(self) -> float:
        return self.distances[-1]


def flat_profile(
    length_m: float, height_a: float, height_b: float, samples: int = 17
) -> ElevationProfile:
    """Evenly sampled profile over flat ground at elevation 0."""
    step = length_m / (samples - 1)
    return ElevationProfile(
        distances=tuple(i * step for i in range(samples)),
        elevations=(0.0,) * samples,
        height_a=height_a,
        height_b=height_b,
    )


@dataclass(frozen=True)
class ClearanceResult:
    """Worst ratio of vertical clearance to first Fresnel radius along a link."""

    worst_fraction: float
    blocking_sample: int | None

    def unobstructed(self, threshold: float = DEFAULT_CLEARANCE_FRACTION) -> bool:
        return self.worst_fraction >= threshold


def los_clearance(profile: ElevationProfile, frequency_mhz: float) -> ClearanceResult:
    """Scan interior samples for the tightest Fresnel clearance.

    The direct ray runs between the two antenna tops; at each interior
    sample the vertical clearance to ground is divided by the local first
    Fresnel radius. Negative fractions mean the ray is below ground.
    """
    total = profile.length
    ray_a = profile.elevations[0] + profile.height_a
    ray_b = profile.elevations[-1] + profile.height_b
    worst = NO_OBSTRUCTION
    worst_idx: int | None = None
    for i in range(1, len(profile.distances) - 1):
        d1 = profile.distances[i]
        d2 = total - d1
        ray_height = ray_a + (ray_b - ray_a) * d1 / total
        clearance = ray_height - profile.elevations[i]
        fraction = clearance / first_fresnel_radius(d1, d2, frequency_mhz)
        if fraction < worst:
            worst = fraction
            worst_idx = i
    return ClearanceResult(worst_fraction=worst, blocking_sample=worst_idx)


def mast_height_check(
    profile: ElevationProfile,
    mast_height_m: float,
    frequency_mhz: float,
    threshold: float = DEFAULT_CLEARANCE_FRACTION,
) -> bool:
    """True when masts of the given height at both ends clear the Fresnel rule."""
    if mast_height_m <= 0.0:
        raise PropagationError("mast height must be positive")
    raised = ElevationProfile(
        distances=profile.distances,
        elevations=profile.elevations,
        height_a=mast_height_m,
        height_b=mast_height_m,
    )
    return los_clearance(raised, frequency_mhz).unobstructed(threshold)


def effective_range(
    model: PathLossModel,
    radio,
    min_rate_mbps: float,
    resolution_m: float = 0.1,
) -> float:
    """Largest distance (capped at the radio's max range) sustaining `min_rate_mbps`.

    Found by bisection on the monotone rate-vs-distance curve. Raises
    PropagationError when no distance in the model's domain achieves the rate.
    """
    if min_rate_mbps > radio.max_rate:
        raise PropagationError(
            f"radio cannot achieve rate: {min_rate_mbps} > max rate {radio.max_rate}"
        )

    def rate_at(d: float) -> float:
        rx = link_budget(radio, path_loss_db(model, d, radio.frequency))
        return rate_from_rx(radio, rx)

    lo = model.reference_distance
    hi = float(radio.max_range)
    if hi <= lo:
        hi = lo
    if rate_at(hi) >= min_rate_mbps:
        return hi
    if rate_at(lo) < min_rate_mbps:
        raise PropagationError(
            f"radio cannot achieve rate: {min_rate_mbps} Mbit/s unreachable at any distance"
        )
    while hi - lo > resolution_m:
        mid = (lo + hi) / 2.0
        if rate_at(mid) >= min_rate_mbps:
            lo = mid
        else:
            hi = mid
    return lo


def lowest_rate(radio) -> float:
    """Smallest entry of the radio's rate table (the widest-reach rate)."""
    return min(rate for _, rate in radio.rate_table)
