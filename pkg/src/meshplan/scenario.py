"""Problem-instance data model: a discretized region with a landline gateway,
radio technology, environment classes, demand profiles, and solver knobs.

Scenario files are UTF-8 JSON, strict about unknown keys so typos fail loudly.
All lengths are meters; demand rates are kbit/s; radio rates are Mbit/s with
unit-suffixed keys throughout. Parsing enforces structure (types, key sets,
index bounds); semantic invariants are reported by validate_scenario instead
so broken data can be diagnosed rather than rejected mid-parse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .cost import (
    COMPONENT_CLASSES,
    CostModel,
    DEFAULT_COST_MODEL,
    PriceDistribution,
    point,
    triangular,
    uniform,
)
from .demand import DEFAULT_PROFILES, AppProfile
from .propagation import (
    DEFAULT_CLEARANCE_FRACTION,
    DEFAULT_EXPONENTS,
    ENVIRONMENT_CLASSES,
    ElevationProfile,
    PathLossModel,
)


class ScenarioError(ValueError):
    """Base for all scenario-file problems."""


class ParseError(ScenarioError):
    """Document is not well-formed JSON."""


class SchemaError(ScenarioError):
    """Missing or unknown key, or a value of the wrong type."""


class RangeError(ScenarioError):
    """Structurally unusable value: bad index, nonpositive dimension."""


NODE_KINDS = ("none", "indoor", "outdoor", "both")


@dataclass(frozen=True)
class Cell:
    """One elementary area of the region grid."""

    interest: bool = False
    placement: bool = True
    node_kind_allowed: str = "both"
    elevation: float = 0.0
    dispersion: float = 1.0
    growth: float = 1.0
    users: int = 0
    profile: str | None = None

    def allows(self, kind: str) -> bool:
        """Whether a node of `kind` ("indoor"/"outdoor") may sit here."""
        return self.placement and self.node_kind_allowed in (kind, "both")


@dataclass(frozen=True)
class RegionGrid:
    """Row-major square-cell grid; cell centers are the predefined positions."""

    rows: int
    cols: int
    cell_size: float
    cells: tuple[Cell, ...]
    gateway: int


@dataclass(frozen=True)
class RadioTechnology:
    """One radio profile: link budget terms plus a sensitivity-to-rate table."""

    name: str
    max_range: float
    max_rate: float
    frequency: float
    tx_power: float
    antenna_gain_tx: float
    antenna_gain_rx: float
    cable_loss: float
    rate_table: tuple[tuple[float, float], ...]


BUILTIN_RADIOS: dict[str, RadioTechnology] = {
    "802.11g": RadioTechnology(
        name="802.11g",
        max_range=150.0,
        max_rate=54.0,
        frequency=2400.0,
        tx_power=20.0,
        antenna_gain_tx=5.0,
        antenna_gain_rx=5.0,
        cable_loss=2.0,
        rate_table=(
            (-94.0, 6.0),
            (-91.0, 9.0),
            (-90.0, 12.0),
            (-86.0, 18.0),
            (-83.0, 24.0),
            (-77.0, 36.0),
            (-74.0, 48.0),
            (-72.0, 54.0),
        ),
    ),
    "802.11n": RadioTechnology(
        name="802.11n",
        max_range=250.0,
        max_rate=248.0,
        frequency=2400.0,
        tx_power=20.0,
        antenna_gain_tx=5.0,
        antenna_gain_rx=5.0,
        cable_loss=2.0,
        rate_table=(
            (-95.0, 6.5),
            (-91.0, 13.0),
            (-87.0, 26.0),
            (-83.0, 52.0),
            (-79.0, 104.0),
            (-75.0, 156.0),
            (-71.0, 208.0),
            (-68.0, 248.0),
        ),
    ),
}


@dataclass(frozen=True)
class IndoorSite:
    """A declared building that may host an indoor node on its rooftop."""

    cell: int
    roof_height: float
    grid_power: bool = True
    power_reliability: float = 1.0


@dataclass(frozen=True)
class EnvironmentConfig:
    """Global environment class with optional per-cell overrides and exponents."""

    default: str = "free_space"
    exponents: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_EXPONENTS))
    clearance_fraction: float = DEFAULT_CLEARANCE_FRACTION
    reference_distance: float = 1.0
    overrides: Mapping[int, str] = field(default_factory=dict)

    def class_of(self, cell_index: int) -> str:
        return self.overrides.get(cell_index, self.default)

    def model_for(self, environment: str) -> PathLossModel:
        return PathLossModel(
            environment=environment,
            exponent=self.exponents[environment],
            reference_distance=self.reference_distance,
        )

    def worse_of(self, class_a: str, class_b: str) -> str:
        """The more lossy of two environment classes (larger exponent)."""
        return max((class_a, class_b), key=lambda c: self.exponents[c])


@dataclass(frozen=True)
class SolverParams:
    """Knobs for node selection, channel assignment, and load evaluation."""

    coverage_weighting: bool = True
    local_search_passes: int = 3
    rng_seed: int = 0
    oracle_limit: int = 12
    indoor_bias: float = 2.0
    radios_per_node: int = 2
    utilization_factor: float = 0.5
    interference_range: float | None = None
    reliability_threshold: float = 0.0
    channels: tuple[int, ...] = (1, 6, 11)
    gateway_capacity: float | None = None


@dataclass(frozen=True)
class LoopParams:
    """Design-loop schedule: geometric range reduction with a floor."""

    range_reduction_factor: float = 0.9
    max_iterations: int = 20
    min_range_fraction: float = 0.4


@dataclass(frozen=True)
class Scenario:
    """A full problem instance, immutable after parsing."""

    grid: RegionGrid
    radio: RadioTechnology
    environment: EnvironmentConfig
    indoor_sites: tuple[IndoorSite, ...]
    mast_height: float
    coverage_radius: float
    demand_profiles: tuple[AppProfile, ...]
    cost_model: CostModel
    solver: SolverParams
    loop: LoopParams

    def profile_named(self, name: str) -> AppProfile | None:
        for profile in self.demand_profiles:
            if profile.name == name:
                return profile
        return None


# ---------------------------------------------------------------------------
# Grid geometry


def cell_rowcol(grid: RegionGrid, index: int) -> tuple[int, int]:
    if not 0 <= index < grid.rows * grid.cols:
        raise RangeError(f"cell index {index} out of range for {grid.rows}x{grid.cols} grid")
    return divmod(index, grid.cols)


def cell_index(grid: RegionGrid, row: int, col: int) -> int:
    if not (0 <= row < grid.rows and 0 <= col < grid.cols):
        raise RangeError(f"cell ({row}, {col}) out of range for {grid.rows}x{grid.cols} grid")
    return row * grid.cols + col


def cell_center_xy(grid: RegionGrid, index: int) -> tuple[float, float]:
    """Planar coordinates of a cell center, meters from the grid origin."""
    row, col = cell_rowcol(grid, index)
    return ((col + 0.5) * grid.cell_size, (row + 0.5) * grid.cell_size)


def cell_distance(grid: RegionGrid, a: int, b: int) -> float:
    """Euclidean distance between cell centers."""
    row_a, col_a = cell_rowcol(grid, a)
    row_b, col_b = cell_rowcol(grid, b)
    return grid.cell_size * math.hypot(row_a - row_b, col_a - col_b)


def _axis_interp(fraction: float, count: int) -> tuple[int, int, float]:
    # Clamp outside the strip of cell centers so edges extend flat.
    if fraction <= 0.0 or count == 1:
        return 0, 0, 0.0
    if fraction >= count - 1:
        return count - 1, count - 1, 0.0
    lo = int(math.floor(fraction))
    return lo, lo + 1, fraction - lo


def elevation_at(grid: RegionGrid, x: float, y: float) -> float:
    """Ground elevation at planar (x, y), bilinear between cell centers."""
    u = x / grid.cell_size - 0.5
    v = y / grid.cell_size - 0.5
    col_lo, col_hi, fx = _axis_interp(u, grid.cols)
    row_lo, row_hi, fy = _axis_interp(v, grid.rows)
    e00 = grid.cells[row_lo * grid.cols + col_lo].elevation
    e01 = grid.cells[row_lo * grid.cols + col_hi].elevation
    e10 = grid.cells[row_hi * grid.cols + col_lo].elevation
    e11 = grid.cells[row_hi * grid.cols + col_hi].elevation
    top = e00 + (e01 - e00) * fx
    bottom = e10 + (e11 - e10) * fx
    return top + (bottom - top) * fy


def link_profile(
    grid: RegionGrid, a: int, b: int, height_a: float, height_b: float
) -> ElevationProfile:
    """Elevation profile along the segment between two cell centers.

    One sample per cell crossed, never fewer than 16.
    """
    if a == b:
        raise RangeError("link endpoints must differ")
    ax, ay = cell_center_xy(grid, a)
    bx, by = cell_center_xy(grid, b)
    length = cell_distance(grid, a, b)
    samples = max(16, math.ceil(length / grid.cell_size) + 1)
    step = length / (samples - 1)
    distances = []
    elevations = []
    for i in range(samples):
        t = i / (samples - 1)
        distances.append(i * step)
        elevations.append(elevation_at(grid, ax + (bx - ax) * t, ay + (by - ay) * t))
    return ElevationProfile(
        distances=tuple(distances),
        elevations=tuple(elevations),
        height_a=height_a,
        height_b=height_b,
    )


# ---------------------------------------------------------------------------
# Parsing

_MISSING = object()


def _object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{path}: expected object, got {type(value).__name__}")
    return dict(value)


def _array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected array, got {type(value).__name__}")
    return value


def _finish(obj: dict, path: str) -> None:
    if obj:
        raise SchemaError(f"{path}: unknown key(s): {', '.join(sorted(obj))}")


def _pop(obj: dict, key: str, path: str, default: Any = _MISSING) -> Any:
    if key in obj:
        return obj.pop(key)
    if default is _MISSING:
        raise SchemaError(f"{path}: missing required key '{key}'")
    return default


def _bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{path}: expected boolean, got {type(value).__name__}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}: expected integer, got {type(value).__name__}")
    return value


def _float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected number, got {type(value).__name__}")
    return float(value)


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: expected string, got {type(value).__name__}")
    return value


def _enum(value: Any, path: str, allowed: tuple[str, ...]) -> str:
    text = _str(value, path)
    if text not in allowed:
        raise SchemaError(f"{path}: expected one of {', '.join(allowed)}; got '{text}'")
    return text


def _parse_cell(value: Any, path: str) -> Cell:
    obj = _object(value, path)
    placement = _bool(_pop(obj, "placement", path, True), f"{path}.placement")
    default_kind = "both" if placement else "none"
    cell = Cell(
        interest=_bool(_pop(obj, "interest", path, False), f"{path}.interest"),
        placement=placement,
        node_kind_allowed=_enum(_pop(obj, "kind", path, default_kind), f"{path}.kind", NODE_KINDS),
        elevation=_float(_pop(obj, "elev_m", path, 0.0), f"{path}.elev_m"),
        dispersion=_float(_pop(obj, "d", path, 1.0), f"{path}.d"),
        growth=_float(_pop(obj, "g", path, 1.0), f"{path}.g"),
        users=_int(_pop(obj, "users", path, 0), f"{path}.users"),
        profile=None
        if (raw := _pop(obj, "profile", path, None)) is None
        else _str(raw, f"{path}.profile"),
    )
    _finish(obj, path)
    return cell


def _parse_grid(value: Any, path: str) -> RegionGrid:
    obj = _object(value, path)
    rows = _int(_pop(obj, "rows", path), f"{path}.rows")
    cols = _int(_pop(obj, "cols", path), f"{path}.cols")
    cell_size = _float(_pop(obj, "cell_size_m", path), f"{path}.cell_size_m")
    if rows <= 0:
        raise RangeError(f"{path}.rows: must be positive, got {rows}")
    if cols <= 0:
        raise RangeError(f"{path}.cols: must be positive, got {cols}")
    if cell_size <= 0:
        raise RangeError(f"{path}.cell_size_m: must be positive, got {cell_size}")

    raw_gateway = _pop(obj, "gateway", path)
    if isinstance(raw_gateway, list):
        if len(raw_gateway) != 2:
            raise SchemaError(f"{path}.gateway: expected [row, col] pair")
        row = _int(raw_gateway[0], f"{path}.gateway[0]")
        col = _int(raw_gateway[1], f"{path}.gateway[1]")
        if not (0 <= row < rows and 0 <= col < cols):
            raise RangeError(f"{path}.gateway: ({row}, {col}) outside {rows}x{cols} grid")
        gateway = row * cols + col
    else:
        gateway = _int(raw_gateway, f"{path}.gateway")
        if not 0 <= gateway < rows * cols:
            raise RangeError(f"{path}.gateway: index {gateway} outside 0..{rows * cols - 1}")

    raw_cells = _pop(obj, "cells", path, None)
    if raw_cells is None:
        cells = tuple(Cell() for _ in range(rows * cols))
    else:
        records = _array(raw_cells, f"{path}.cells")
        if len(records) != rows * cols:
            raise RangeError(
                f"{path}.cells: expected {rows * cols} records for {rows}x{cols} grid, "
                f"got {len(records)}"
            )
        cells = tuple(_parse_cell(rec, f"{path}.cells[{i}]") for i, rec in enumerate(records))
    _finish(obj, path)
    return RegionGrid(rows=rows, cols=cols, cell_size=cell_size, cells=cells, gateway=gateway)


def _parse_rate_table(value: Any, path: str) -> tuple[tuple[float, float], ...]:
    entries = []
    for i, raw in enumerate(_array(value, path)):
        pair = _array(raw, f"{path}[{i}]")
        if len(pair) != 2:
            raise SchemaError(f"{path}[{i}]: expected [sensitivity_dbm, rate_mbps] pair")
        entries.append(
            (_float(pair[0], f"{path}[{i}][0]"), _float(pair[1], f"{path}[{i}][1]"))
        )
    return tuple(entries)


def _parse_radio(value: Any, path: str) -> RadioTechnology:
    if isinstance(value, str):
        if value not in BUILTIN_RADIOS:
            raise SchemaError(
                f"{path}: unknown radio '{value}'; built in: {', '.join(sorted(BUILTIN_RADIOS))}"
            )
        return BUILTIN_RADIOS[value]
    obj = _object(value, path)
    name = _str(_pop(obj, "name", path), f"{path}.name")
    # A built-in name serves as the base; its fields may be overridden one by
    # one. Unknown names must spell out every field.
    base = BUILTIN_RADIOS.get(name)

    def take(key: str, convert, attr: str):
        if key not in obj:
            if base is None:
                raise SchemaError(f"{path}: missing required key '{key}'")
            return getattr(base, attr)
        return convert(obj.pop(key), f"{path}.{key}")

    radio = RadioTechnology(
        name=name,
        max_range=take("max_range_m", _float, "max_range"),
        max_rate=take("max_rate_mbps", _float, "max_rate"),
        frequency=take("frequency_mhz", _float, "frequency"),
        tx_power=take("tx_power_dbm", _float, "tx_power"),
        antenna_gain_tx=take("antenna_gain_tx_dbi", _float, "antenna_gain_tx"),
        antenna_gain_rx=take("antenna_gain_rx_dbi", _float, "antenna_gain_rx"),
        cable_loss=take("cable_loss_db", _float, "cable_loss"),
        rate_table=take("rate_table", _parse_rate_table, "rate_table"),
    )
    _finish(obj, path)
    return radio


def _parse_environment(value: Any, path: str) -> EnvironmentConfig:
    if isinstance(value, str):
        return EnvironmentConfig(default=_enum(value, path, ENVIRONMENT_CLASSES))
    obj = _object(value, path)
    default = _enum(_pop(obj, "default", path, "free_space"), f"{path}.default", ENVIRONMENT_CLASSES)
    exponents = dict(DEFAULT_EXPONENTS)
    raw_exp = _pop(obj, "exponents", path, None)
    if raw_exp is not None:
        for key, raw in _object(raw_exp, f"{path}.exponents").items():
            if key not in ENVIRONMENT_CLASSES:
                raise SchemaError(f"{path}.exponents: unknown environment class '{key}'")
            exponents[key] = _float(raw, f"{path}.exponents.{key}")
    clearance = _float(
        _pop(obj, "clearance_fraction", path, DEFAULT_CLEARANCE_FRACTION),
        f"{path}.clearance_fraction",
    )
    reference = _float(
        _pop(obj, "reference_distance_m", path, 1.0), f"{path}.reference_distance_m"
    )
    overrides: dict[int, str] = {}
    raw_over = _pop(obj, "overrides", path, None)
    if raw_over is not None:
        for key, raw in _object(raw_over, f"{path}.overrides").items():
            try:
                idx = int(key)
            except ValueError:
                raise SchemaError(f"{path}.overrides: key '{key}' is not a cell index") from None
            overrides[idx] = _enum(raw, f"{path}.overrides.{key}", ENVIRONMENT_CLASSES)
    _finish(obj, path)
    return EnvironmentConfig(
        default=default,
        exponents=exponents,
        clearance_fraction=clearance,
        reference_distance=reference,
        overrides=overrides,
    )


def _parse_indoor_site(value: Any, path: str) -> IndoorSite:
    obj = _object(value, path)
    site = IndoorSite(
        cell=_int(_pop(obj, "cell", path), f"{path}.cell"),
        roof_height=_float(_pop(obj, "roof_height_m", path), f"{path}.roof_height_m"),
        grid_power=_bool(_pop(obj, "grid_power", path, True), f"{path}.grid_power"),
        power_reliability=_float(
            _pop(obj, "power_reliability", path, 1.0), f"{path}.power_reliability"
        ),
    )
    _finish(obj, path)
    return site


def _parse_profile(value: Any, path: str) -> AppProfile:
    obj = _object(value, path)
    profile = AppProfile(
        name=_str(_pop(obj, "name", path), f"{path}.name"),
        per_user_rate=_float(_pop(obj, "rate_kbps", path), f"{path}.rate_kbps"),
        latency_tolerant=_bool(
            _pop(obj, "latency_tolerant", path, True), f"{path}.latency_tolerant"
        ),
        cap_filling=_bool(_pop(obj, "cap_filling", path, False), f"{path}.cap_filling"),
    )
    _finish(obj, path)
    return profile


def _parse_price(value: Any, path: str) -> PriceDistribution:
    # Shorthands: number -> point, [lo, hi] -> uniform, [lo, mode, hi] -> triangular.
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return point(float(value))
    if isinstance(value, list):
        params = [_float(v, f"{path}[{i}]") for i, v in enumerate(value)]
        if len(params) == 2:
            return uniform(*params)
        if len(params) == 3:
            return triangular(*params)
        raise SchemaError(f"{path}: expected [lo, hi] or [lo, mode, hi]")
    obj = _object(value, path)
    kind = _enum(_pop(obj, "kind", path), f"{path}.kind", ("point", "uniform", "triangular"))
    raw_params = _array(_pop(obj, "params", path), f"{path}.params")
    params = tuple(_float(v, f"{path}.params[{i}]") for i, v in enumerate(raw_params))
    _finish(obj, path)
    return PriceDistribution(kind=kind, params=params)


def _parse_cost_model(value: Any, path: str) -> CostModel:
    obj = _object(value, path)
    currency = _str(_pop(obj, "currency", path, "USD"), f"{path}.currency")
    trials = _int(_pop(obj, "trials", path, DEFAULT_COST_MODEL.trials), f"{path}.trials")
    prices = dict(DEFAULT_COST_MODEL.prices)
    raw_prices = _pop(obj, "prices", path, None)
    if raw_prices is not None:
        for key, raw in _object(raw_prices, f"{path}.prices").items():
            if key not in COMPONENT_CLASSES:
                raise SchemaError(f"{path}.prices: unknown component class '{key}'")
            prices[key] = _parse_price(raw, f"{path}.prices.{key}")
    _finish(obj, path)
    return CostModel(currency=currency, prices=prices, trials=trials)


def _parse_solver(value: Any, path: str) -> SolverParams:
    obj = _object(value, path)
    defaults = SolverParams()
    raw_interference = _pop(obj, "interference_range_m", path, defaults.interference_range)
    raw_capacity = _pop(obj, "gateway_capacity_kbps", path, defaults.gateway_capacity)
    raw_channels = _pop(obj, "channels", path, None)
    if raw_channels is None:
        channels = defaults.channels
    else:
        channels = tuple(
            _int(v, f"{path}.channels[{i}]")
            for i, v in enumerate(_array(raw_channels, f"{path}.channels"))
        )
    params = SolverParams(
        coverage_weighting=_bool(
            _pop(obj, "coverage_weighting", path, defaults.coverage_weighting),
            f"{path}.coverage_weighting",
        ),
        local_search_passes=_int(
            _pop(obj, "local_search_passes", path, defaults.local_search_passes),
            f"{path}.local_search_passes",
        ),
        rng_seed=_int(_pop(obj, "rng_seed", path, defaults.rng_seed), f"{path}.rng_seed"),
        oracle_limit=_int(
            _pop(obj, "oracle_limit", path, defaults.oracle_limit), f"{path}.oracle_limit"
        ),
        indoor_bias=_float(
            _pop(obj, "indoor_bias", path, defaults.indoor_bias), f"{path}.indoor_bias"
        ),
        radios_per_node=_int(
            _pop(obj, "radios_per_node", path, defaults.radios_per_node),
            f"{path}.radios_per_node",
        ),
        utilization_factor=_float(
            _pop(obj, "utilization_factor", path, defaults.utilization_factor),
            f"{path}.utilization_factor",
        ),
        interference_range=None
        if raw_interference is None
        else _float(raw_interference, f"{path}.interference_range_m"),
        reliability_threshold=_float(
            _pop(obj, "reliability_threshold", path, defaults.reliability_threshold),
            f"{path}.reliability_threshold",
        ),
        channels=channels,
        gateway_capacity=None
        if raw_capacity is None
        else _float(raw_capacity, f"{path}.gateway_capacity_kbps"),
    )
    _finish(obj, path)
    return params


def _parse_loop(value: Any, path: str) -> LoopParams:
    obj = _object(value, path)
    defaults = LoopParams()
    params = LoopParams(
        range_reduction_factor=_float(
            _pop(obj, "range_reduction_factor", path, defaults.range_reduction_factor),
            f"{path}.range_reduction_factor",
        ),
        max_iterations=_int(
            _pop(obj, "max_iterations", path, defaults.max_iterations),
            f"{path}.max_iterations",
        ),
        min_range_fraction=_float(
            _pop(obj, "min_range_fraction", path, defaults.min_range_fraction),
            f"{path}.min_range_fraction",
        ),
    )
    _finish(obj, path)
    return params


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document, applying documented defaults to omitted keys."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    obj = _object(document, "scenario")

    grid = _parse_grid(_pop(obj, "grid", "scenario"), "grid")
    raw_radio = _pop(obj, "radio", "scenario", None)
    radio = BUILTIN_RADIOS["802.11g"] if raw_radio is None else _parse_radio(raw_radio, "radio")
    raw_env = _pop(obj, "environment", "scenario", None)
    environment = EnvironmentConfig() if raw_env is None else _parse_environment(raw_env, "environment")

    raw_sites = _pop(obj, "indoor_sites", "scenario", None)
    if raw_sites is None:
        indoor_sites: tuple[IndoorSite, ...] = ()
    else:
        indoor_sites = tuple(
            _parse_indoor_site(rec, f"indoor_sites[{i}]")
            for i, rec in enumerate(_array(raw_sites, "indoor_sites"))
        )
    for i, site in enumerate(indoor_sites):
        if not 0 <= site.cell < grid.rows * grid.cols:
            raise RangeError(f"indoor_sites[{i}].cell: index {site.cell} outside grid")

    mast_height = _float(_pop(obj, "mast_height_m", "scenario", 10.0), "mast_height_m")
    coverage_radius = _float(
        _pop(obj, "coverage_radius_m", "scenario", radio.max_range * 0.5), "coverage_radius_m"
    )

    raw_profiles = _pop(obj, "demand_profiles", "scenario", None)
    if raw_profiles is None:
        profiles = DEFAULT_PROFILES
    else:
        profiles = tuple(
            _parse_profile(rec, f"demand_profiles[{i}]")
            for i, rec in enumerate(_array(raw_profiles, "demand_profiles"))
        )

    raw_cost = _pop(obj, "cost_model", "scenario", None)
    cost_model = DEFAULT_COST_MODEL if raw_cost is None else _parse_cost_model(raw_cost, "cost_model")
    raw_solver = _pop(obj, "solver", "scenario", None)
    solver = SolverParams() if raw_solver is None else _parse_solver(raw_solver, "solver")
    raw_loop = _pop(obj, "loop", "scenario", None)
    loop = LoopParams() if raw_loop is None else _parse_loop(raw_loop, "loop")
    _finish(obj, "scenario")

    return Scenario(
        grid=grid,
        radio=radio,
        environment=environment,
        indoor_sites=indoor_sites,
        mast_height=mast_height,
        coverage_radius=coverage_radius,
        demand_profiles=profiles,
        cost_model=cost_model,
        solver=solver,
        loop=loop,
    )


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as handle:
        return parse_scenario(handle.read())


# ---------------------------------------------------------------------------
# Serialization (canonical form: every key explicit, fixed order)


def serialize_scenario(s: Scenario) -> str:
    document = {
        "grid": {
            "rows": s.grid.rows,
            "cols": s.grid.cols,
            "cell_size_m": s.grid.cell_size,
            "gateway": s.grid.gateway,
            "cells": [
                {
                    "interest": c.interest,
                    "placement": c.placement,
                    "kind": c.node_kind_allowed,
                    "elev_m": c.elevation,
                    "d": c.dispersion,
                    "g": c.growth,
                    "users": c.users,
                    "profile": c.profile,
                }
                for c in s.grid.cells
            ],
        },
        "radio": {
            "name": s.radio.name,
            "max_range_m": s.radio.max_range,
            "max_rate_mbps": s.radio.max_rate,
            "frequency_mhz": s.radio.frequency,
            "tx_power_dbm": s.radio.tx_power,
            "antenna_gain_tx_dbi": s.radio.antenna_gain_tx,
            "antenna_gain_rx_dbi": s.radio.antenna_gain_rx,
            "cable_loss_db": s.radio.cable_loss,
            "rate_table": [list(entry) for entry in s.radio.rate_table],
        },
        "environment": {
            "default": s.environment.default,
            "exponents": {cls: s.environment.exponents[cls] for cls in ENVIRONMENT_CLASSES},
            "clearance_fraction": s.environment.clearance_fraction,
            "reference_distance_m": s.environment.reference_distance,
            "overrides": {
                str(idx): s.environment.overrides[idx]
                for idx in sorted(s.environment.overrides)
            },
        },
        "indoor_sites": [
            {
                "cell": site.cell,
                "roof_height_m": site.roof_height,
                "grid_power": site.grid_power,
                "power_reliability": site.power_reliability,
            }
            for site in s.indoor_sites
        ],
        "mast_height_m": s.mast_height,
        "coverage_radius_m": s.coverage_radius,
        "demand_profiles": [
            {
                "name": p.name,
                "rate_kbps": p.per_user_rate,
                "latency_tolerant": p.latency_tolerant,
                "cap_filling": p.cap_filling,
            }
            for p in s.demand_profiles
        ],
        "cost_model": {
            "currency": s.cost_model.currency,
            "trials": s.cost_model.trials,
            "prices": {
                component: {
                    "kind": s.cost_model.prices[component].kind,
                    "params": list(s.cost_model.prices[component].params),
                }
                for component in COMPONENT_CLASSES
                if component in s.cost_model.prices
            },
        },
        "solver": {
            "coverage_weighting": s.solver.coverage_weighting,
            "local_search_passes": s.solver.local_search_passes,
            "rng_seed": s.solver.rng_seed,
            "oracle_limit": s.solver.oracle_limit,
            "indoor_bias": s.solver.indoor_bias,
            "radios_per_node": s.solver.radios_per_node,
            "utilization_factor": s.solver.utilization_factor,
            "interference_range_m": s.solver.interference_range,
            "reliability_threshold": s.solver.reliability_threshold,
            "channels": list(s.solver.channels),
            "gateway_capacity_kbps": s.solver.gateway_capacity,
        },
        "loop": {
            "range_reduction_factor": s.loop.range_reduction_factor,
            "max_iterations": s.loop.max_iterations,
            "min_range_fraction": s.loop.min_range_fraction,
        },
    }
    return json.dumps(document, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    """Invariant violations plus reachability warnings; empty means admissible."""

    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.violations and not self.warnings


def validate_scenario(s: Scenario) -> ValidationReport:
    """Check every documented invariant; violations are data, not exceptions."""
    violations: list[str] = []
    warnings: list[str] = []
    grid = s.grid
    total = grid.rows * grid.cols

    if len(grid.cells) != total:
        violations.append(
            f"grid: {grid.rows}x{grid.cols} grid needs {total} cells, has {len(grid.cells)}"
        )
        return ValidationReport(violations=tuple(violations))
    if grid.cell_size <= 0:
        violations.append(f"grid: cell size must be positive, is {grid.cell_size}")
    if not 0 <= grid.gateway < total:
        violations.append(f"grid: gateway index {grid.gateway} out of range")
    elif not grid.cells[grid.gateway].placement:
        violations.append(f"cell {grid.gateway}: gateway cell has placement=false")

    profile_names = {p.name for p in s.demand_profiles}
    for i, cell in enumerate(grid.cells):
        if not cell.placement and cell.node_kind_allowed != "none":
            violations.append(
                f"cell {i}: placement=false but kind={cell.node_kind_allowed}"
            )
        if cell.node_kind_allowed not in NODE_KINDS:
            violations.append(f"cell {i}: unknown kind '{cell.node_kind_allowed}'")
        if cell.dispersion < 0:
            violations.append(f"cell {i}: dispersion {cell.dispersion} < 0")
        if cell.growth < 0:
            violations.append(f"cell {i}: growth {cell.growth} < 0")
        if cell.users < 0:
            violations.append(f"cell {i}: users {cell.users} < 0")
        if not math.isfinite(cell.elevation):
            violations.append(f"cell {i}: elevation not finite")
        if cell.profile is not None and cell.profile not in profile_names:
            violations.append(f"cell {i}: unknown demand profile '{cell.profile}'")

    for p in s.demand_profiles:
        if p.per_user_rate < 0:
            violations.append(f"profile '{p.name}': rate {p.per_user_rate} < 0")

    radio = s.radio
    if radio.max_range <= 0:
        violations.append(f"radio: max range must be positive, is {radio.max_range}")
    if not radio.rate_table:
        violations.append("radio: empty rate table")
    else:
        sensitivities = [sens for sens, _ in radio.rate_table]
        rates = [rate for _, rate in radio.rate_table]
        if any(b <= a for a, b in zip(sensitivities, sensitivities[1:])):
            violations.append("radio: rate table sensitivities not strictly ascending")
        if any(b <= a for a, b in zip(rates, rates[1:])):
            violations.append("radio: rate table rates not strictly increasing")
        if radio.max_rate != max(rates):
            violations.append(
                f"radio: max rate {radio.max_rate} != largest table rate {max(rates)}"
            )

    if s.mast_height <= 0:
        violations.append(f"mast height must be positive, is {s.mast_height}")
    if s.coverage_radius <= 0:
        violations.append(f"coverage radius must be positive, is {s.coverage_radius}")
    elif s.coverage_radius > radio.max_range:
        violations.append(
            f"coverage radius {s.coverage_radius} exceeds radio max range {radio.max_range}"
        )

    for i, site in enumerate(s.indoor_sites):
        if not 0 <= site.cell < total:
            violations.append(f"indoor site {i}: cell index {site.cell} out of range")
            continue
        if not grid.cells[site.cell].placement:
            violations.append(f"indoor site {i}: cell {site.cell} has placement=false")
        if site.roof_height <= 0:
            violations.append(f"indoor site {i}: roof height {site.roof_height} <= 0")
        if not 0.0 <= site.power_reliability <= 1.0:
            violations.append(
                f"indoor site {i}: power reliability {site.power_reliability} outside [0, 1]"
            )

    env = s.environment
    if env.default not in ENVIRONMENT_CLASSES:
        violations.append(f"environment: unknown class '{env.default}'")
    for cls in ENVIRONMENT_CLASSES:
        exponent = env.exponents.get(cls)
        if exponent is None:
            violations.append(f"environment: no exponent for class '{cls}'")
        elif exponent < 2.0:
            violations.append(f"environment: exponent for '{cls}' is {exponent} < 2.0")
    if not 0.0 < env.clearance_fraction <= 1.0:
        violations.append(
            f"environment: clearance fraction {env.clearance_fraction} outside (0, 1]"
        )
    if env.reference_distance <= 0:
        violations.append(
            f"environment: reference distance {env.reference_distance} <= 0"
        )
    for idx, cls in sorted(env.overrides.items()):
        if not 0 <= idx < total:
            violations.append(f"environment: override index {idx} out of range")
        if cls not in ENVIRONMENT_CLASSES:
            violations.append(f"environment: override for cell {idx} names unknown class '{cls}'")

    solver = s.solver
    if not 1 <= solver.oracle_limit <= 20:
        violations.append(f"solver: oracle limit {solver.oracle_limit} outside 1..20")
    if solver.local_search_passes < 0:
        violations.append(f"solver: local search passes {solver.local_search_passes} < 0")
    if not 0.0 < solver.utilization_factor <= 1.0:
        violations.append(
            f"solver: utilization factor {solver.utilization_factor} outside (0, 1]"
        )
    if solver.radios_per_node < 1:
        violations.append(f"solver: radios per node {solver.radios_per_node} < 1")
    if not solver.channels:
        violations.append("solver: empty channel set")
    if solver.indoor_bias <= 0:
        violations.append(f"solver: indoor bias {solver.indoor_bias} <= 0")
    if solver.interference_range is not None and solver.interference_range < 0:
        violations.append(f"solver: interference range {solver.interference_range} < 0")
    if solver.gateway_capacity is not None and solver.gateway_capacity < 0:
        violations.append(f"solver: gateway capacity {solver.gateway_capacity} < 0")

    loop = s.loop
    if not 0.0 < loop.range_reduction_factor < 1.0:
        violations.append(
            f"loop: range reduction factor {loop.range_reduction_factor} outside (0, 1)"
        )
    if loop.max_iterations < 1:
        violations.append(f"loop: max iterations {loop.max_iterations} < 1")
    if not 0.0 < loop.min_range_fraction <= 1.0:
        violations.append(
            f"loop: min range fraction {loop.min_range_fraction} outside (0, 1]"
        )

    # Reachability scan: an interest cell farther than max range from every
    # cell that could host a node can never be served at any link range.
    if not violations:
        hosts = [i for i, c in enumerate(grid.cells) if c.placement and c.node_kind_allowed != "none"]
        for i, cell in enumerate(grid.cells):
            if not cell.interest:
                continue
            if not any(cell_distance(grid, i, h) <= radio.max_range for h in hosts):
                warnings.append(f"unreachable interest area (cell {i})")

    return ValidationReport(violations=tuple(violations), warnings=tuple(warnings))
