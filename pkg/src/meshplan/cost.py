"""Bill of materials and Monte Carlo deployment cost estimation.

Indoor nodes reuse a building's roof and grid power, so they only need a
router and its installation. Outdoor nodes additionally need a mast and an
autonomous power chain (solar kit + battery), which is what makes them the
dominant cost driver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import numpy as np

if TYPE_CHECKING:
    from .planner import NetworkPlan

COMPONENT_CLASSES = (
    "indoor_router",
    "outdoor_router",
    "mast",
    "solar_kit",
    "battery",
    "installation_indoor",
    "installation_outdoor",
    "cabling",
)

# Component bundle per node kind. The gateway is a pre-existing landline
# building and is equipped like an indoor node.
NODE_COMPONENTS: dict[str, tuple[str, ...]] = {
    "indoor": ("indoor_router", "installation_indoor"),
    "outdoor": (
        "outdoor_router",
        "mast",
        "solar_kit",
        "battery",
        "installation_outdoor",
    ),
}


class CostModelError(ValueError):
    """Invalid price distribution or unknown component class."""


@dataclass(frozen=True)
class PriceDistribution:
    """Price of one component class: point(v), uniform(lo,hi) or triangular(lo,mode,hi)."""

    kind: str  # "point" | "uniform" | "triangular"
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        expected = {"point": 1, "uniform": 2, "triangular": 3}.get(self.kind)
        if expected is None:
            raise CostModelError(f"unknown distribution kind {self.kind!r}")
        if len(self.params) != expected:
            raise CostModelError(
                f"{self.kind} distribution takes {expected} parameter(s), got {len(self.params)}"
            )
        if any(p < 0.0 for p in self.params):
            raise CostModelError(f"negative price in {self.kind}{self.params}")
        if list(self.params) != sorted(self.params):
            raise CostModelError(f"{self.kind} parameters must be ordered: {self.params}")

    @property
    def mean(self) -> float:
        if self.kind == "point":
            return self.params[0]
        if self.kind == "uniform":
            return (self.params[0] + self.params[1]) / 2.0
        return sum(self.params) / 3.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "point":
            return np.full(n, self.params[0])
        if self.kind == "uniform":
            lo, hi = self.params
            return rng.uniform(lo, hi, n) if hi > lo else np.full(n, lo)
        lo, mode, hi = self.params
        if hi == lo:
            return np.full(n, lo)
        return rng.triangular(lo, mode, hi, n)


def point(value: float) -> PriceDistribution:
    return PriceDistribution("point", (value,))


def uniform(lo: float, hi: float) -> PriceDistribution:
    return PriceDistribution("uniform", (lo, hi))


def triangular(lo: float, mode: float, hi: float) -> PriceDistribution:
    return PriceDistribution("triangular", (lo, mode, hi))


DEFAULT_PRICES: dict[str, PriceDistribution] = {
    "indoor_router": point(50.0),
    "outdoor_router": point(120.0),
    "mast": point(100.0),
    "solar_kit": point(150.0),
    "battery": point(80.0),
    "installation_indoor": point(20.0),
    "installation_outdoor": point(60.0),
    "cabling": point(10.0),
}


@dataclass(frozen=True)
class CostModel:
    """Per-component price distributions in one currency unit."""

    currency: str = "USD"
    prices: Mapping[str, PriceDistribution] = field(
        default_factory=lambda: dict(DEFAULT_PRICES)
    )
    trials: int = 10_000

    def price(self, component: str) -> PriceDistribution:
        if component not in COMPONENT_CLASSES:
            raise CostModelError(f"unknown component class {component!r}")
        dist = self.prices.get(component)
        if dist is None:
            raise CostModelError(f"cost model has no price for {component!r}")
        return dist


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True)
class BillOfMaterials:
    """Component quantities derived from a plan; zero-quantity lines omitted."""

    quantities: Mapping[str, int] = field(default_factory=dict)

    def scaled(self, factor: int) -> "BillOfMaterials":
        return BillOfMaterials({c: q * factor for c, q in self.quantities.items()})


@dataclass(frozen=True)
class CostEstimate:
    mean: float
    std: float
    p5: float
    p50: float
    p95: float
    trials: int
    rng_seed: int
    currency: str = "USD"


def bill_of_materials(plan: "NetworkPlan", model: CostModel | None = None) -> BillOfMaterials:
    """Derive component quantities from the plan's selected nodes."""
    counts: dict[str, int] = {}
    for site in plan.selected:
        kind = "indoor" if site.id == "GW" else site.kind
        for component in NODE_COMPONENTS[kind]:
            counts[component] = counts.get(component, 0) + 1
    return BillOfMaterials(counts)


def point_total(bom: BillOfMaterials, model: CostModel) -> float:
    """Deterministic total using each distribution's mean price."""
    return sum(qty * model.price(c).mean for c, qty in bom.quantities.items())


def sample_totals(
    bom: BillOfMaterials,
    model: CostModel,
    trials: int,
    seed: int,
) -> np.ndarray:
    """Per-trial total-cost draws. Deterministic for a given seed.

    Component prices are drawn independently per trial; each component's
    draw stream is derived from (seed, component) so the result does not
    depend on evaluation order.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    totals = np.zeros(trials)
    for component in sorted(bom.quantities):
        qty = bom.quantities[component]
        if qty == 0:
            continue
        dist = model.price(component)
        rng = np.random.default_rng([seed, _component_stream(component)])
        totals += qty * dist.sample(rng, trials)
    return totals


def estimate_cost(
    bom: BillOfMaterials,
    model: CostModel,
    trials: int,
    seed: int,
) -> CostEstimate:
    """Monte Carlo total-cost estimate, summarized from sample_totals draws."""
    totals = sample_totals(bom, model, trials, seed)
    p5, p50, p95 = np.percentile(totals, [5.0, 50.0, 95.0])
    return CostEstimate(
        mean=float(np.mean(totals)),
        std=float(np.std(totals)),
        p5=float(p5),
        p50=float(p50),
        p95=float(p95),
        trials=trials,
        rng_seed=seed,
        currency=model.currency,
    )


def _component_stream(component: str) -> int:
    return COMPONENT_CLASSES.index(component)
