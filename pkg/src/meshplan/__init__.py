"""Rural wireless mesh network planning: scenario model, RF feasibility,
node placement, channel assignment, design-loop verification, and cost
estimation."""

from .cost import (
    BillOfMaterials,
    CostEstimate,
    CostModel,
    PriceDistribution,
    bill_of_materials,
    estimate_cost,
    point,
    point_total,
    sample_totals,
    triangular,
    uniform,
)
from .candidates import (
    CandidateSite,
    feasible_links,
    gateway_site,
    generate_ocp,
    identify_icp,
)
from .demand import (
    DEFAULT_PROFILES,
    AppProfile,
    DemandMap,
    area_demand,
    link_budget,
    rate_from_rx,
    scenario_demand,
)
from .pipeline import (
    DesignReport,
    IterationRecord,
    VerificationReport,
    run_design_loop,
    serialize_report,
    trace_csv,
    verify,
)
from .planner import (
    DisconnectedSites,
    InfeasibleCoverage,
    Link,
    NetworkPlan,
    NotATree,
    OracleTooLarge,
    PlanMetrics,
    PlanningError,
    assign_channels,
    brute_force_plan,
    coverage_sets,
    evaluate_plan,
    parse_plan,
    select_nodes,
    serialize_plan,
)
from .propagation import (
    ClearanceResult,
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
from .scenario import (
    Cell,
    EnvironmentConfig,
    IndoorSite,
    LoopParams,
    ParseError,
    RadioTechnology,
    RangeError,
    RegionGrid,
    Scenario,
    ScenarioError,
    SchemaError,
    SolverParams,
    ValidationReport,
    cell_distance,
    link_profile,
    parse_scenario,
    serialize_scenario,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AppProfile",
    "BillOfMaterials",
    "CandidateSite",
    "Cell",
    "ClearanceResult",
    "CostEstimate",
    "CostModel",
    "DEFAULT_PROFILES",
    "DemandMap",
    "DesignReport",
    "DisconnectedSites",
    "ElevationProfile",
    "EnvironmentConfig",
    "IndoorSite",
    "InfeasibleCoverage",
    "IterationRecord",
    "Link",
    "LoopParams",
    "NetworkPlan",
    "NotATree",
    "OracleTooLarge",
    "ParseError",
    "PathLossModel",
    "PlanMetrics",
    "PlanningError",
    "PriceDistribution",
    "PropagationError",
    "RadioTechnology",
    "RangeError",
    "RegionGrid",
    "Scenario",
    "ScenarioError",
    "SchemaError",
    "SolverParams",
    "ValidationReport",
    "VerificationReport",
    "area_demand",
    "assign_channels",
    "bill_of_materials",
    "brute_force_plan",
    "cell_distance",
    "coverage_sets",
    "effective_range",
    "estimate_cost",
    "evaluate_plan",
    "feasible_links",
    "first_fresnel_radius",
    "flat_profile",
    "free_space_path_loss_db",
    "gateway_site",
    "generate_ocp",
    "identify_icp",
    "link_budget",
    "link_profile",
    "los_clearance",
    "mast_height_check",
    "parse_plan",
    "parse_scenario",
    "path_loss_db",
    "point",
    "point_total",
    "rate_from_rx",
    "run_design_loop",
    "sample_totals",
    "scenario_demand",
    "select_nodes",
    "serialize_plan",
    "serialize_report",
    "serialize_scenario",
    "trace_csv",
    "triangular",
    "uniform",
    "validate_scenario",
    "verify",
]
