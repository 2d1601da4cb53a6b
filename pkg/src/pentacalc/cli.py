"""Command-line interface: identity-suite checks, transport runs, and flow
tabulation over scenario files.

Exit codes: 0 all pass, 1 any identity failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .algebra import FiveVector, active_frame, apply
from .connection import build_connection, transport
from .fields import Point, parse_field
from .lieflow import FlowError, phi_pull, psi_scale_factor, psi_transform
from .parser import ParseError
from .products import g5, h as h_product
from .scenario import SUITE_NAMES, ScenarioError, load_scenario
from .suites import run_suite

USAGE_ERROR = 2


def _positive_suites(values, scenario):
    if values:
        return list(values)
    if scenario.checks:
        return [c.suite for c in scenario.checks]
    return list(SUITE_NAMES)


def cmd_check(args) -> int:
    scenario = load_scenario(args.spec)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    suites = _positive_suites(args.suite, scenario)
    report = run_suite(scenario, suites, tol_scale=args.tol)
    text = report.to_jsonl()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    for r in report.records:
        status = "PASS" if r.status == "pass" else "FAIL"
        print(f"[{status}] {r.name}  max_error={r.max_error:.3e}  tol={r.tolerance:.1e}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_transport(args) -> int:
    scenario = load_scenario(args.spec)
    curve = scenario.curves.get(args.curve)
    if curve is None:
        raise ScenarioError("/curves", f"unknown curve {args.curve!r}")
    comps = [float(v) for v in args.vector.split(",")]
    if len(comps) != 5:
        raise ScenarioError("/", "--vector needs five comma-separated components")
    frame = active_frame(scenario.constants)
    G = build_connection(scenario.metric, scenario.constants, frame)
    p0 = curve.point_at(args.t0)
    p1 = curve.point_at(args.t1)
    v0 = FiveVector(tuple(comps), frame, p0)
    v1 = transport(v0, curve, args.t0, args.t1, G, scenario.settings)
    g_before = g5(v0, v0, scenario.metric, p0)
    g_after = g5(v1, v1, scenario.metric, p1)
    h_before = h_product(v0, v0, scenario.metric, scenario.constants, p0)
    h_after = h_product(v1, v1, scenario.metric, scenario.constants, p1)
    record = {
        "type": "transport",
        "curve": args.curve,
        "from": args.t0,
        "to": args.t1,
        "initial": list(v0.components),
        "final": list(np.round(v1.components, 14)),
        "delta_g": g_after - g_before,
        "delta_h": h_after - h_before,
        "lambda_drift": v1.lam - v0.lam,
    }
    print(json.dumps(record, sort_keys=True))
    return 0


def cmd_flow(args) -> int:
    scenario = load_scenario(args.spec)
    u = scenario.fields.get(args.field)
    if u is None:
        raise ScenarioError("/fields", f"unknown field {args.field!r}")
    f = parse_field(args.fn)
    psi = psi_transform(f, u, args.t, scenario.settings)
    phi = phi_pull(f, u, args.t, scenario.settings)
    unit = psi_scale_factor(u, args.t, scenario.settings)
    pts = scenario.probe_points(count=8, box=0.4)
    psi_vals = psi.eval_many(pts)
    phi_vals = phi.eval_many(pts)
    unit_vals = unit.eval_many(pts)
    residual = float(np.abs(psi_vals - unit_vals * phi_vals).max())
    record = {
        "type": "flow",
        "field": args.field,
        "fn": args.fn,
        "t": args.t,
        "points": [list(np.round(p, 14)) for p in pts],
        "psi": list(np.round(psi_vals, 14)),
        "phi": list(np.round(phi_vals, 14)),
        "factorization_residual": residual,
    }
    print(json.dumps(record, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pentacalc",
        description="Five-vector calculus identity harness",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run identity suites against a scenario")
    p_check.add_argument("--spec", required=True, metavar="FILE")
    p_check.add_argument(
        "--suite",
        action="append",
        choices=SUITE_NAMES,
        help="suite to run (repeatable); default: scenario checks or all",
    )
    p_check.add_argument("--tol", type=float, default=1.0, help="scale all tolerances")
    p_check.add_argument("--seed", type=int, default=None, help="override the probe seed")
    p_check.add_argument("--report", metavar="FILE", help="write the JSONL report here")
    p_check.set_defaults(fn=cmd_check)

    p_tr = sub.add_parser("transport", help="parallel-transport a five-vector along a curve")
    p_tr.add_argument("--spec", required=True, metavar="FILE")
    p_tr.add_argument("--curve", required=True)
    p_tr.add_argument("--vector", required=True, help="five comma-separated components (active frame)")
    p_tr.add_argument("--from", dest="t0", type=float, required=True)
    p_tr.add_argument("--to", dest="t1", type=float, required=True)
    p_tr.set_defaults(fn=cmd_transport)

    p_fl = sub.add_parser("flow", help="tabulate the finite flow transforms of a function")
    p_fl.add_argument("--spec", required=True, metavar="FILE")
    p_fl.add_argument("--field", required=True)
    p_fl.add_argument("--fn", required=True, help="scalar expression over x0..x3")
    p_fl.add_argument("--t", type=float, required=True)
    p_fl.set_defaults(fn=cmd_flow)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ScenarioError, ParseError, FileNotFoundError, FlowError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
