"""Design-loop orchestration: generate candidates, plan, verify; shrink the
link range geometrically and retry until requirements hold or the budget
runs out.

Shorter links carry higher PHY rates, so reducing the range trades node
count for per-hop throughput. Indoor candidates do not depend on the range
and stay fixed across iterations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from io import StringIO

from .candidates import feasible_links, generate_ocp, identify_icp
from .demand import scenario_demand
from .planner import (
    DisconnectedSites,
    InfeasibleCoverage,
    NetworkPlan,
    apply_metrics,
    assign_channels,
    build_conflict_graph,
    evaluate_plan,
    link_key,
    select_nodes,
)
from .propagation import effective_range, lowest_rate
from .scenario import Scenario, cell_distance


@dataclass(frozen=True)
class VerificationReport:
    """Coverage and throughput checks with the violating items."""

    coverage_ok: bool
    throughput_ok: bool
    uncovered_cells: tuple[int, ...] = ()
    overloaded_links: tuple[tuple[str, str], ...] = ()
    gateway_overloaded: bool = False

    @property
    def ok(self) -> bool:
        return self.coverage_ok and self.throughput_ok

    @property
    def violation_count(self) -> int:
        return (
            len(self.uncovered_cells)
            + len(self.overloaded_links)
            + (1 if self.gateway_overloaded else 0)
        )


@dataclass(frozen=True)
class IterationRecord:
    """One design-loop iteration, for the trace."""

    index: int
    link_range: float
    coverage_ok: bool
    throughput_ok: bool
    site_count: int | None = None
    outdoor_count: int | None = None
    link_count: int | None = None
    min_link_headroom: float | None = None
    residual_conflicts: int | None = None
    failure: str | None = None


@dataclass(frozen=True)
class DesignReport:
    """Loop outcome: a verified plan, or the failure cause and best attempt."""

    status: str  # verified | infeasible_coverage | disconnected | budget_exhausted
    plan: NetworkPlan | None
    verification: VerificationReport | None
    trace: tuple[IterationRecord, ...]
    initial_range: float
    final_range: float

    @property
    def iterations_used(self) -> int:
        return len(self.trace)

    @property
    def verified(self) -> bool:
        return self.status == "verified"


def verify(plan: NetworkPlan, s: Scenario) -> VerificationReport:
    """Recheck coverage distances and link loads against capacities.

    Works from the plan alone (loads stamped on links), recomputing
    distances and collision domains rather than trusting stored metrics.
    """
    uncovered = []
    for i, cell in enumerate(s.grid.cells):
        if not cell.interest:
            continue
        serving = plan.coverage.get(i)
        if serving is None:
            uncovered.append(i)
            continue
        site = plan.site(serving)
        if cell_distance(s.grid, site.cell, i) > s.coverage_radius:
            uncovered.append(i)

    sites = {site.id: site for site in plan.selected}
    conflict_adj = build_conflict_graph(plan.topology, s, sites)
    overloaded = []
    for i, link in enumerate(plan.topology):
        domain = 1 + sum(
            1 for j in conflict_adj[i] if plan.topology[j].channel == link.channel
        )
        capacity = link.rate * 1000.0 * s.solver.utilization_factor / domain
        if link.load > capacity:
            overloaded.append(link_key(link.a, link.b))

    capacity_cap = s.solver.gateway_capacity
    gateway_overloaded = (
        capacity_cap is not None and plan.metrics.gateway_aggregate > capacity_cap
    )
    return VerificationReport(
        coverage_ok=not uncovered,
        throughput_ok=not overloaded and not gateway_overloaded,
        uncovered_cells=tuple(uncovered),
        overloaded_links=tuple(sorted(overloaded)),
        gateway_overloaded=gateway_overloaded,
    )


def run_design_loop(s: Scenario, initial_range: float | None = None) -> DesignReport:
    """Iterate candidate generation, planning, and verification.

    Iteration i plans with link range initial x factor^(i-1); the loop
    stops at the first verified plan, at an unfixable failure (coverage or
    connectivity can only worsen as the range shrinks), at the range floor,
    or when the iteration budget is exhausted, whichever comes first.
    """
    demand = scenario_demand(s)
    icp = identify_icp(s)
    if initial_range is None:
        model = s.environment.model_for(s.environment.default)
        initial_range = effective_range(model, s.radio, lowest_rate(s.radio))
    floor = initial_range * s.loop.min_range_fraction

    trace: list[IterationRecord] = []
    best_plan: NetworkPlan | None = None
    best_verification: VerificationReport | None = None
    best_score: tuple | None = None
    failure_status: str | None = None
    link_range = initial_range

    for index in range(1, s.loop.max_iterations + 1):
        link_range = initial_range * s.loop.range_reduction_factor ** (index - 1)
        if link_range < floor:
            break
        ocp = generate_ocp(s, link_range)
        links = feasible_links((*icp, *ocp), s, link_range)
        try:
            plan = select_nodes(s, icp, ocp, links)
        except (InfeasibleCoverage, DisconnectedSites) as exc:
            # Shrinking the range only removes candidates and links, so
            # these failures cannot heal in later iterations.
            trace.append(
                IterationRecord(
                    index=index,
                    link_range=link_range,
                    coverage_ok=False,
                    throughput_ok=False,
                    failure=str(exc),
                )
            )
            failure_status = (
                "infeasible_coverage"
                if isinstance(exc, InfeasibleCoverage)
                else "disconnected"
            )
            break
        plan = assign_channels(plan, s)
        metrics = evaluate_plan(plan, demand, s)
        plan = apply_metrics(plan, metrics)
        report = verify(plan, s)
        trace.append(
            IterationRecord(
                index=index,
                link_range=link_range,
                coverage_ok=report.coverage_ok,
                throughput_ok=report.throughput_ok,
                site_count=len(plan.selected),
                outdoor_count=metrics.outdoor_count,
                link_count=len(plan.topology),
                min_link_headroom=metrics.min_link_headroom,
                residual_conflicts=metrics.residual_conflicts,
            )
        )
        score = (
            report.coverage_ok,
            report.throughput_ok,
            -report.violation_count,
            metrics.min_link_headroom,
        )
        if best_score is None or score > best_score:
            best_score = score
            best_plan = plan
            best_verification = report
        if report.ok:
            return DesignReport(
                status="verified",
                plan=plan,
                verification=report,
                trace=tuple(trace),
                initial_range=initial_range,
                final_range=link_range,
            )

    return DesignReport(
        status=failure_status or "budget_exhausted",
        plan=best_plan,
        verification=best_verification,
        trace=tuple(trace),
        initial_range=initial_range,
        final_range=trace[-1].link_range if trace else initial_range,
    )


def serialize_report(report: DesignReport) -> str:
    """Canonical JSON form of the loop outcome (plan serialized separately)."""
    verification = None
    if report.verification is not None:
        verification = {
            "coverage_ok": report.verification.coverage_ok,
            "throughput_ok": report.verification.throughput_ok,
            "uncovered_cells": list(report.verification.uncovered_cells),
            "overloaded_links": [list(pair) for pair in report.verification.overloaded_links],
            "gateway_overloaded": report.verification.gateway_overloaded,
        }
    document = {
        "status": report.status,
        "iterations_used": report.iterations_used,
        "initial_range_m": report.initial_range,
        "final_range_m": report.final_range,
        "verification": verification,
        "trace": [
            {
                "iteration": rec.index,
                "link_range_m": rec.link_range,
                "coverage_ok": rec.coverage_ok,
                "throughput_ok": rec.throughput_ok,
                "sites": rec.site_count,
                "outdoor": rec.outdoor_count,
                "links": rec.link_count,
                "min_link_headroom_kbps": None
                if rec.min_link_headroom is not None and math.isinf(rec.min_link_headroom)
                else rec.min_link_headroom,
                "residual_conflicts": rec.residual_conflicts,
                "failure": rec.failure,
            }
            for rec in report.trace
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def trace_csv(report: DesignReport) -> str:
    """Per-iteration trace as delimited text."""
    out = StringIO()
    out.write(
        "iteration,link_range_m,coverage_ok,throughput_ok,sites,outdoor,links,"
        "min_link_headroom_kbps,residual_conflicts,failure\n"
    )

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float) and math.isinf(value):
            return ""
        return str(value)

    for rec in report.trace:
        fields = [
            rec.index,
            rec.link_range,
            rec.coverage_ok,
            rec.throughput_ok,
            rec.site_count,
            rec.outdoor_count,
            rec.link_count,
            rec.min_link_headroom,
            rec.residual_conflicts,
            '"{}"'.format(rec.failure.replace('"', '""')) if rec.failure else "",
        ]
        out.write(",".join(cell(f) if not isinstance(f, str) else f for f in fields))
        out.write("\n")
    return out.getvalue()
