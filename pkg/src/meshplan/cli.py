"""Command-line entry point: validate scenarios, run the design loop, export
plans, and run the exhaustive oracle on small instances.

Exit codes: 0 success, 1 documented infeasibility, 2 usage/IO/parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .candidates import feasible_links, generate_ocp, identify_icp
from .cost import bill_of_materials, estimate_cost, point_total, sample_totals
from .pipeline import run_design_loop, serialize_report, trace_csv
from .planner import PlanningError, brute_force_plan, serialize_plan
from .propagation import PropagationError, effective_range, lowest_rate
from .render import candidates_csv, links_csv, plan_geojson, save_cost, save_map
from .scenario import Scenario, ScenarioError, load_scenario, validate_scenario


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _load(path: str) -> Scenario:
    """Parse a scenario file; raises ScenarioError or OSError."""
    return load_scenario(path)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        s = _load(args.scenario)
    except (ScenarioError, OSError) as exc:
        return _fail(str(exc))
    report = validate_scenario(s)
    for line in report.violations:
        print(f"violation: {line}")
    for line in report.warnings:
        print(f"warning: {line}")
    if report.empty:
        print(f"OK: {s.grid.rows}x{s.grid.cols} grid, gateway at cell {s.grid.gateway}")
        return 0
    return 1


def _apply_overrides(s: Scenario, args: argparse.Namespace) -> Scenario:
    if getattr(args, "seed", None) is not None:
        s = replace(s, solver=replace(s.solver, rng_seed=args.seed))
    if getattr(args, "max_iter", None) is not None:
        s = replace(s, loop=replace(s.loop, max_iterations=args.max_iter))
    return s


def cmd_plan(args: argparse.Namespace) -> int:
    try:
        s = _load(args.scenario)
    except (ScenarioError, OSError) as exc:
        return _fail(str(exc))
    report = validate_scenario(s)
    if report.violations:
        for line in report.violations:
            print(f"violation: {line}", file=sys.stderr)
        return _fail("scenario fails validation")
    for line in report.warnings:
        print(f"warning: {line}", file=sys.stderr)
    s = _apply_overrides(s, args)

    try:
        outcome = run_design_loop(s, initial_range=args.link_range)
    except (PropagationError, PlanningError) as exc:
        return _fail(str(exc))

    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    _write(os.path.join(out_dir, "report.json"), serialize_report(outcome))
    _write(os.path.join(out_dir, "trace.csv"), trace_csv(outcome))

    icp = identify_icp(s)
    ocp = generate_ocp(s, outcome.final_range)
    _write(
        os.path.join(out_dir, "candidates.csv"),
        candidates_csv((*icp, *ocp), s.grid.cols),
    )

    if outcome.plan is not None:
        plan_text = serialize_plan(outcome.plan, s)
        _write(os.path.join(out_dir, "plan.json"), plan_text)
        plan_doc = json.loads(plan_text)
        save_map(plan_doc, s, os.path.join(out_dir, "map.svg"))

        bom = bill_of_materials(outcome.plan)
        trials = s.cost_model.trials
        seed = s.solver.rng_seed
        estimate = estimate_cost(bom, s.cost_model, trials, seed)
        totals = sample_totals(bom, s.cost_model, trials, seed)
        save_cost(totals, estimate, os.path.join(out_dir, "cost_montecarlo.svg"))
        cost_doc = {
            "currency": s.cost_model.currency,
            "trials": trials,
            "seed": seed,
            "bill_of_materials": {
                component: bom.quantities[component]
                for component in sorted(bom.quantities)
            },
            "point_total": point_total(bom, s.cost_model),
            "estimate": {
                "mean": estimate.mean,
                "std": estimate.std,
                "p5": estimate.p5,
                "p50": estimate.p50,
                "p95": estimate.p95,
            },
        }
        _write(
            os.path.join(out_dir, "cost.json"), json.dumps(cost_doc, indent=2) + "\n"
        )

    print(f"status: {outcome.status}")
    print(f"iterations: {outcome.iterations_used}")
    if outcome.plan is not None:
        metrics = outcome.plan.metrics
        print(
            f"sites: {len(outcome.plan.selected)} "
            f"({metrics.outdoor_count} outdoor, {metrics.indoor_count} indoor)"
        )
        print(f"gateway aggregate: {metrics.gateway_aggregate} kbit/s")
    if outcome.verification is not None and not outcome.verification.ok:
        if outcome.verification.uncovered_cells:
            print(f"uncovered cells: {list(outcome.verification.uncovered_cells)}")
        if outcome.verification.overloaded_links:
            print(f"overloaded links: {list(outcome.verification.overloaded_links)}")
        if outcome.verification.gateway_overloaded:
            print("gateway backhaul overloaded")
    if outcome.trace and outcome.trace[-1].failure:
        print(f"failure: {outcome.trace[-1].failure}")
    return 0 if outcome.verified else 1


def cmd_export(args: argparse.Namespace) -> int:
    try:
        with open(args.plan, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        return _fail(str(exc))
    try:
        # Parse strictly first so malformed documents fail loudly.
        from .planner import parse_plan

        parse_plan(text)
        plan_doc = json.loads(text)
    except (PlanningError, json.JSONDecodeError) as exc:
        return _fail(f"unreadable plan: {exc}")

    scenario = None
    if args.scenario is not None:
        try:
            scenario = _load(args.scenario)
        except (ScenarioError, OSError) as exc:
            return _fail(str(exc))

    if args.format == "svg":
        if args.output is None:
            return _fail("--format svg needs -o/--output")
        save_map(plan_doc, scenario, args.output)
        return 0
    text_out = plan_geojson(plan_doc) if args.format == "geojson" else links_csv(plan_doc)
    if args.output is None:
        sys.stdout.write(text_out)
    else:
        _write(args.output, text_out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        s = _load(args.scenario)
    except (ScenarioError, OSError) as exc:
        return _fail(str(exc))
    report = validate_scenario(s)
    if report.violations:
        for line in report.violations:
            print(f"violation: {line}", file=sys.stderr)
        return _fail("scenario fails validation")
    s = _apply_overrides(s, args)

    try:
        link_range = args.link_range
        if link_range is None:
            model = s.environment.model_for(s.environment.default)
            link_range = effective_range(model, s.radio, lowest_rate(s.radio))
        icp = identify_icp(s)
        ocp = generate_ocp(s, link_range)
        links = feasible_links((*icp, *ocp), s, link_range)
        plan = brute_force_plan(s, icp, ocp, links)
    except PropagationError as exc:
        return _fail(str(exc))
    except PlanningError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    text = serialize_plan(plan, s)
    if args.output is None:
        sys.stdout.write(text)
    else:
        _write(args.output, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshplan",
        description="Plan a gateway-rooted rural wireless mesh network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a scenario file")
    p_validate.add_argument("scenario", help="scenario JSON file")
    p_validate.set_defaults(func=cmd_validate)

    p_plan = sub.add_parser("plan", help="run the full design loop")
    p_plan.add_argument("scenario", help="scenario JSON file")
    p_plan.add_argument("-o", "--out-dir", default=".", help="output directory")
    p_plan.add_argument("--seed", type=int, default=None, help="override solver seed")
    p_plan.add_argument(
        "--max-iter", type=int, default=None, help="override loop iteration budget"
    )
    p_plan.add_argument(
        "--link-range",
        type=float,
        default=None,
        help="starting link range in meters (default: effective radio range)",
    )
    p_plan.set_defaults(func=cmd_plan)

    p_export = sub.add_parser("export", help="convert a plan file")
    p_export.add_argument("plan", help="plan JSON file")
    p_export.add_argument(
        "--format", required=True, choices=("svg", "geojson", "csv"), help="output format"
    )
    p_export.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p_export.add_argument(
        "--scenario", default=None, help="scenario file, for cell shading in svg"
    )
    p_export.set_defaults(func=cmd_export)

    p_oracle = sub.add_parser(
        "oracle", help="exhaustive optimum for small instances"
    )
    p_oracle.add_argument("scenario", help="scenario JSON file")
    p_oracle.add_argument("-o", "--output", default=None, help="plan file (default stdout)")
    p_oracle.add_argument("--seed", type=int, default=None, help="override solver seed")
    p_oracle.add_argument(
        "--link-range", type=float, default=None, help="link range in meters"
    )
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OSError as exc:
        return _fail(str(exc))


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
