"""Command-line interface.

Exit codes: 0 ok, 1 usage or configuration error, 2 infeasible power budget
under ``--strict-power``, 3 validation tolerance breach.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import os
import sys
from typing import Any, Optional, Sequence

from llmspace.catalog import CatalogError, TechnologyCatalog, load_catalog
from llmspace.hardware import HardwareError
from llmspace.peripherals import PeripheralKind, SizingError
from llmspace.scenario import (
    CarbonReport,
    Scenario,
    ScenarioError,
    analyze_workload,
    compare,
    evaluate,
    override_task_lengths,
    resolve_scenario,
    scenario_to_dict,
    sweep,
)
from llmspace.validation import REFERENCE, validate_profile
from llmspace.workload import WorkloadError, ingest_trace, read_trace

SCHEMA_VERSION = 1
CATALOG_ENV = "LLMSPACE_CATALOG"

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- payload builders -------------------------------------------------------


def report_payload(r: CarbonReport) -> dict:
    out = {
        "scenario": r.scenario,
        "deployment": r.deployment.value,
        "node_power_kw": r.node_power_kw,
        "lifetime_years": r.lifetime_years,
        "embodied_total_kg": r.embodied_total,
        "operational_annual_kg": r.operational_annual,
        "annualized_kg": r.annualized,
        "grid_intensity_g_per_kwh": r.grid_intensity,
        "items": [
            {"label": i.label, "mode": i.mode.value, "manu_kg": i.manu, "launch_kg": i.launch, "mass_kg": i.mass}
            for i in r.items
        ],
        "peripherals": [],
        "power_budget": None,
        "notes": list(r.notes),
    }
    for p in r.peripherals:
        unit = "kwh" if p.kind is PeripheralKind.BATTERY else "m2"
        entry = {"kind": p.kind.value, "tech": p.tech_name, f"sizing_{unit}": p.sizing, "mass_kg": p.mass,
                 "manu_kg": p.manu_carbon}
        if p.power_kw is not None:
            entry["power_kw"] = p.power_kw
        out["peripherals"].append(entry)
    if r.power_budget is not None:
        b = r.power_budget
        out["power_budget"] = {
            "solar_daily_kwh": b.solar_daily,
            "battery_daily_kwh": b.battery_daily,
            "demand_daily_kwh": b.demand_daily,
            "slack_kwh": b.slack,
            "sunlit_ok": b.sunlit_ok,
            "eclipse_ok": b.eclipse_ok,
            "feasible": b.feasible,
        }
    return out


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")).hexdigest()


def envelope(command: str, inputs: dict, results: Any) -> str:
    env = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs_digest": digest(inputs),
        "results": results,
    }
    return json.dumps(env, indent=2, sort_keys=True) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if v is None:
        return ""
    return str(v)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_csv(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _tabular(fmt: str, headers, rows) -> str:
    return render_csv(headers, rows) if fmt == "csv" else render_table(headers, rows)


# --- commands ----------------------------------------------------------------


def _catalog(args) -> TechnologyCatalog:
    path = args.catalog or os.environ.get(CATALOG_ENV) or None
    return load_catalog(path)


def _inputs(args, catalog: TechnologyCatalog, scenarios: Sequence[Scenario], **options) -> dict:
    return {
        "catalog": catalog.to_dict(),
        "scenarios": [scenario_to_dict(s) for s in scenarios],
        "options": options,
    }


ITEM_HEADERS = ("label", "mode", "manu_kg", "launch_kg", "mass_kg")


def cmd_evaluate(args, out) -> int:
    catalog = _catalog(args)
    scenario = resolve_scenario(args.scenario)
    report = evaluate(scenario, catalog)
    payload = report_payload(report)
    if args.format == "json":
        out.write(envelope("evaluate", _inputs(args, catalog, [scenario], strict_power=args.strict_power), payload))
    else:
        rows = [[i["label"], i["mode"], i["manu_kg"], i["launch_kg"], i["mass_kg"]] for i in payload["items"]]
        rows.append(["total", "", sum(i["manu_kg"] for i in payload["items"]),
                     sum(i["launch_kg"] for i in payload["items"]), sum(i["mass_kg"] for i in payload["items"])])
        out.write(_tabular(args.format, ITEM_HEADERS, rows))
        if args.format == "table":
            out.write(
                f"\nscenario {report.scenario} ({report.deployment.value}), node power {report.node_power_kw:g} kW\n"
                f"embodied_total_kg      {report.embodied_total:.6g}\n"
                f"operational_annual_kg  {report.operational_annual:.6g}\n"
                f"annualized_kg          {report.annualized:.6g}  (lifetime {report.lifetime_years:g} yr)\n"
            )
            if report.power_budget is not None:
                b = report.power_budget
                out.write(
                    f"power budget: solar {b.solar_daily:.6g} kWh/day, battery {b.battery_daily:.6g} kWh/day, "
                    f"demand {b.demand_daily:.6g} kWh/day, feasible={b.feasible}\n"
                )
            for note in report.notes:
                out.write(f"note: {note}\n")
    if args.strict_power and report.power_budget is not None and not report.power_budget.feasible:
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_compare(args, out) -> int:
    if len(args.scenario) < 2:
        raise UsageError("compare needs at least two --scenario flags")
    catalog = _catalog(args)
    scenarios = [resolve_scenario(ref) for ref in args.scenario]
    result = compare(scenarios, catalog)
    rows = [[e.scenario.name, y, v] for e in result.entries for y, v in e.series]
    headers = ("scenario", "lifetime_years", "annualized_kg")
    if args.format == "json":
        payload = {
            "series": [
                {
                    "scenario": e.scenario.name,
                    "embodied_total_kg": e.report.embodied_total,
                    "operational_annual_kg": e.report.operational_annual,
                    "points": [{"lifetime_years": y, "annualized_kg": v} for y, v in e.series],
                }
                for e in result.entries
            ],
            "ratios": [
                {"numerator": result.entries[i].scenario.name, "denominator": result.entries[j].scenario.name,
                 "index": [i, j], "annualized_ratio": r}
                for i, j, r in result.ratios
            ],
        }
        out.write(envelope("compare", _inputs(args, catalog, scenarios), payload))
    else:
        out.write(_tabular(args.format, headers, rows))
    return EXIT_OK


def _parse_value(text: str) -> Any:
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def _parse_axis(spec: str) -> tuple[str, list]:
    path, sep, values = spec.partition("=")
    if not sep or not path or not values:
        raise UsageError(f"--axis expects path=v1,v2,..., got {spec!r}")
    return path.strip(), [_parse_value(v.strip()) for v in values.split(",")]


def cmd_sweep(args, out) -> int:
    catalog = _catalog(args)
    base = resolve_scenario(args.scenario)
    axes = [_parse_axis(a) for a in args.axis]
    cells = sweep(base, axes, catalog)
    paths = [p for p, _ in axes]
    if args.format == "json":
        payload = [
            {
                "coords": {p: v for p, v in c.coords},
                "summary": None if c.report is None else {
                    "embodied_total_kg": c.report.embodied_total,
                    "operational_annual_kg": c.report.operational_annual,
                    "annualized_kg": c.report.annualized,
                    "node_power_kw": c.report.node_power_kw,
                    "items": [{"label": i.label, "manu_kg": i.manu, "launch_kg": i.launch} for i in c.report.items],
                },
                "error": c.error,
            }
            for c in cells
        ]
        out.write(envelope("sweep", _inputs(args, catalog, [base], axes=[[p, v] for p, v in axes]), payload))
    else:
        headers = [*paths, "embodied_total_kg", "operational_annual_kg", "annualized_kg", "error"]
        rows = []
        for c in cells:
            vals = [v for _, v in c.coords]
            if c.report is None:
                rows.append([*vals, None, None, None, c.error])
            else:
                rows.append([*vals, c.report.embodied_total, c.report.operational_annual, c.report.annualized, None])
        out.write(_tabular(args.format, headers, rows))
    return EXIT_OK


WORKLOAD_HEADERS = (
    "task", "prompt_len_tokens", "gen_len_tokens", "ttft_s", "tbt_s", "e2e_s", "prefill_energy_j",
    "decode_energy_j", "tx_energy_j", "operational_g", "amortized_embodied_g", "prefill_share_g", "decode_share_g",
)


def cmd_workload(args, out) -> int:
    catalog = _catalog(args)
    scenario = resolve_scenario(args.scenario)
    report = evaluate(scenario, catalog)
    requested = args.task or ["all"]
    names: list[str] = []
    for t in requested:
        names.extend(scenario.tasks or catalog.names("task") if t == "all" else [t])
    tasks = [catalog.lookup("task", n) for n in names]
    calibration = None
    if args.trace:
        model = catalog.lookup("model", scenario.model)
        accel = dataclasses.replace(
            catalog.lookup("accelerator", scenario.accelerator), node_power=report.node_power_kw
        )
        profile, calibration = ingest_trace(read_trace(args.trace), model, accel)
        tasks.append(profile)
    tasks = [override_task_lengths(t, args.prompt_len, args.gen_len) for t in tasks]
    results = analyze_workload(scenario, report, catalog, tasks, calibration, args.n_requests)

    rows = []
    for a in results:
        m, c = a.estimate.mean, a.carbon
        rows.append([a.estimate.task, m.prompt_len, m.gen_len, m.ttft, m.tbt, m.e2e, m.prefill_energy,
                     m.decode_energy, m.tx_energy, c.operational, c.amortized_embodied, c.prefill_share,
                     c.decode_share])
    if args.format == "json":
        payload = {
            "scenario": scenario.name,
            "node_power_kw": report.node_power_kw,
            "calibration": None if calibration is None else {
                "energy_scale": calibration.energy_scale,
                "ttft_scale": calibration.ttft_scale,
                "tbt_scale": calibration.tbt_scale,
            },
            "tasks": [
                {
                    **dict(zip(WORKLOAD_HEADERS, row)),
                    "e2e_min_s": a.estimate.min.e2e,
                    "e2e_max_s": a.estimate.max.e2e,
                    "n_requests": a.estimate.n_requests,
                    "total_energy_j": a.estimate.total_energy,
                }
                for row, a in zip(rows, results)
            ],
        }
        options = {"tasks": names, "trace": _file_digest(args.trace), "prompt_len": args.prompt_len,
                   "gen_len": args.gen_len, "n_requests": args.n_requests}
        out.write(envelope("workload", _inputs(args, catalog, [scenario], **options), payload))
    else:
        out.write(_tabular(args.format, WORKLOAD_HEADERS, rows))
        if calibration is not None and args.format == "table":
            out.write(
                f"\ncalibration: energy_scale={calibration.energy_scale:.6g} "
                f"ttft_scale={calibration.ttft_scale:.6g} tbt_scale={calibration.tbt_scale:.6g}\n"
            )
    return EXIT_OK


def _file_digest(path: Optional[str]) -> Optional[str]:
    if not path:
        return None
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def cmd_validate(args, out, err) -> int:
    catalog = _catalog(args)
    profiles = list(REFERENCE) if args.profile == "all" else [args.profile]
    results = [validate_profile(p, catalog) for p in profiles]
    headers = ("profile", "component", "column", "model_t", "reference_t", "delta_pct", "tolerance_pct", "status")
    rows = []
    for res in results:
        for r in res.rows:
            status = "info" if r.tolerance is None else ("pass" if r.passed else "FAIL")
            tol = None if r.tolerance is None else r.tolerance * 100
            rows.append([r.profile, r.label, r.column, r.model_t, r.reference_t, r.delta * 100, tol, status])
    if args.format == "json":
        payload = [dict(zip(headers, row)) for row in rows]
        out.write(envelope("validate", _inputs(args, catalog, [], profiles=profiles), payload))
    else:
        out.write(_tabular(args.format, headers, rows))
    breaches = [r for res in results for r in res.breaches]
    if breaches:
        for r in breaches:
            err.write(f"breach: {r.profile} {r.label} {r.column}: {r.delta:+.2%} (tolerance {r.tolerance:.0%})\n")
        return EXIT_BREACH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--catalog", help=f"catalog override file (default: ${CATALOG_ENV})")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")

    parser = _Parser(prog="llmspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evaluate", parents=[common], help="itemized carbon report for one scenario")
    p.add_argument("--scenario", required=True, help="golden scenario name, file, or file#name")
    p.add_argument("--strict-power", action="store_true", help="exit 2 when the power budget is infeasible")

    p = sub.add_parser("compare", parents=[common], help="annualized emissions over lifetime")
    p.add_argument("--scenario", action="append", default=[], required=True)

    p = sub.add_parser("sweep", parents=[common], help="Cartesian parameter sweep")
    p.add_argument("--scenario", required=True)
    p.add_argument("--axis", action="append", default=[], help="path=v1,v2,... (repeatable)")

    p = sub.add_parser("workload", parents=[common], help="per-task latency, energy and carbon")
    p.add_argument("--scenario", required=True)
    p.add_argument("--task", action="append", help="task name or 'all' (repeatable)")
    p.add_argument("--trace", help="measured trace CSV for task statistics and calibration")
    p.add_argument("--prompt-len", type=int)
    p.add_argument("--gen-len", type=int)
    p.add_argument("--n-requests", type=int, default=1)

    p = sub.add_parser("validate", parents=[common], help="golden-scenario validation")
    p.add_argument("--profile", choices=(*REFERENCE, "all"), default="cots")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "validate":
            return cmd_validate(args, out, err)
        return {"evaluate": cmd_evaluate, "compare": cmd_compare, "sweep": cmd_sweep,
                "workload": cmd_workload}[args.command](args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except (CatalogError, ScenarioError, WorkloadError, HardwareError, SizingError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
