"""Full deployments: orbital satellites and terrestrial data centers.

A :class:`Scenario` references catalog entries by name. :func:`evaluate`
turns it into an itemized :class:`CarbonReport`; the remaining functions build
on reports (lifetime annualization, per-request amortization, comparisons and
parameter sweeps).
"""

from __future__ import annotations

import dataclasses
import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

from llmspace.catalog import CatalogError, TechnologyCatalog, read_document
from llmspace.hardware import (
    CarbonMode,
    Hardness,
    HardwareError,
    harden,
    hardening_preset,
    node_carbon,
    platform_carbon,
)
from llmspace.launch import LaunchAssignment, launch_carbon
from llmspace.peripherals import (
    SOLAR_IRRADIANCE,
    OrbitTiming,
    SizedPeripheral,
    SizingError,
    SizingPolicy,
    ThermalEnvironment,
    size_battery,
    size_radiator,
    size_solar,
)
from llmspace.power import PowerBudget, daily_budget
from llmspace.workload import (
    Calibration,
    InferenceEstimate,
    TaskEstimate,
    TaskProfile,
    TokenStats,
    WorkloadError,
    estimate_task,
)

HOURS_PER_YEAR = 8760.0
SECONDS_PER_YEAR = HOURS_PER_YEAR * 3600.0
LIFETIME_GRID = tuple(range(1, 11))

SOLAR_LABEL = "solar array"
BATTERY_LABEL = "battery"
COOLING_LABEL = "cooling panel"
COMPUTE_LABEL = "computing HW"
PLATFORM_LABEL = "net+satellite"


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        self.reason = message
        super().__init__(f"{path}: {message}" if path else message)


class Deployment(str, Enum):
    ORBITAL = "ORBITAL"
    TERRESTRIAL = "TERRESTRIAL"


@dataclass(frozen=True)
class Scenario:
    name: str
    deployment: Deployment = Deployment.ORBITAL
    node: str = "DGX-H100"
    hardening: str = "cots"
    solar_tech: Optional[str] = "Si"
    battery_tech: Optional[str] = "NMC"
    radiator_tech: Optional[str] = "honeycomb"
    sizing_policy: SizingPolicy = SizingPolicy.DEMAND_MATCH
    timing: OrbitTiming = field(default_factory=OrbitTiming)
    thermal: ThermalEnvironment = field(default_factory=ThermalEnvironment)
    dod: float = 0.8
    battery_efficiency: float = 1.0
    isi: float = SOLAR_IRRADIANCE
    heat_load_kw: Optional[float] = None  # defaults to node power
    vehicle: Optional[str] = "Falcon-9"
    platform: Optional[str] = "starlink-v1"
    grid: Optional[str] = None
    lifetime_years: float = 2.0
    duty_factor: float = 1.0
    tasks: tuple[str, ...] = ()
    model: str = "CodeLlama-34B"
    accelerator: str = "H100-SXM"
    description: str = ""

    def __post_init__(self):
        try:
            object.__setattr__(self, "deployment", Deployment(self.deployment))
            object.__setattr__(self, "sizing_policy", SizingPolicy(self.sizing_policy))
        except ValueError as exc:
            raise ScenarioError(str(exc), self.name) from None
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if not self.lifetime_years > 0:
            raise ScenarioError("lifetime_years must be positive", f"{self.name}.lifetime_years")
        if not 0 < self.duty_factor <= 1:
            raise ScenarioError("duty_factor must be in (0, 1]", f"{self.name}.duty_factor")
        if self.deployment is Deployment.ORBITAL:
            for f in ("solar_tech", "battery_tech", "radiator_tech", "vehicle", "platform"):
                if not getattr(self, f):
                    raise ScenarioError("orbital scenarios must name this entry", f"{self.name}.{f}")
        elif not self.grid:
            raise ScenarioError("terrestrial scenarios must name a grid", f"{self.name}.grid")

    @property
    def orbital(self) -> bool:
        return self.deployment is Deployment.ORBITAL


@dataclass(frozen=True)
class ReportItem:
    label: str
    manu: float  # kgCO2e
    launch: float  # kgCO2e
    mode: CarbonMode
    mass: float = 0.0  # kg


@dataclass(frozen=True)
class CarbonReport:
    scenario: str
    deployment: Deployment
    items: tuple[ReportItem, ...]
    embodied_total: float  # kgCO2e
    operational_annual: float  # kgCO2e/yr
    annualized: float  # kgCO2e/yr
    lifetime_years: float
    node_power_kw: float
    grid_intensity: float = 0.0  # gCO2e/kWh
    power_budget: Optional[PowerBudget] = None
    peripherals: tuple[SizedPeripheral, ...] = ()
    notes: tuple[str, ...] = ()

    def item(self, label: str) -> ReportItem:
        for it in self.items:
            if it.label == label:
                return it
        raise KeyError(label)


@dataclass(frozen=True)
class RequestCarbon:
    operational: float  # gCO2e
    amortized_embodied: float  # gCO2e
    prefill_share: float  # gCO2e
    decode_share: float  # gCO2e


def embodied_sum(items: Iterable[ReportItem]) -> float:
    return sum(it.manu + it.launch for it in items)


def annualize(report: CarbonReport, lifetime: float) -> float:
    if not lifetime > 0:
        raise ScenarioError("lifetime must be positive")
    return report.embodied_total / lifetime + report.operational_annual


def _build_node(scenario: Scenario, catalog: TechnologyCatalog):
    try:
        profile = hardening_preset(scenario.hardening)
    except HardwareError as exc:
        raise ScenarioError(str(exc), f"{scenario.name}.hardening") from None
    if scenario.orbital and profile.mode is Hardness.COTS and scenario.lifetime_years > profile.lifetime_years:
        raise ScenarioError(
            f"COTS hardware survives ~{profile.lifetime_years:g} years in LEO; "
            f"lifetime_years={scenario.lifetime_years:g} needs a rad-hard preset",
            f"{scenario.name}.lifetime_years",
        )
    node = harden(catalog.lookup("compute_node", scenario.node), profile, catalog)
    return node, node_carbon(node, catalog)


def evaluate(scenario: Scenario, catalog: TechnologyCatalog) -> CarbonReport:
    """Itemized embodied carbon, annual operational carbon and power budget."""
    node, nc = _build_node(scenario, catalog)
    if not scenario.orbital:
        grid = catalog.lookup("grid", scenario.grid)
        items = (ReportItem(COMPUTE_LABEL, nc.total, 0.0, nc.mode, nc.mass),)
        embodied = embodied_sum(items)
        operational = nc.power * HOURS_PER_YEAR * scenario.duty_factor * grid.intensity / 1000.0
        return CarbonReport(
            scenario=scenario.name,
            deployment=scenario.deployment,
            items=items,
            embodied_total=embodied,
            operational_annual=operational,
            annualized=embodied / scenario.lifetime_years + operational,
            lifetime_years=scenario.lifetime_years,
            node_power_kw=nc.power,
            grid_intensity=grid.intensity,
        )

    demand = nc.power
    heat = scenario.heat_load_kw if scenario.heat_load_kw is not None else demand
    timing = scenario.timing
    try:
        solar = size_solar(
            demand, timing, catalog.lookup("solar", scenario.solar_tech), scenario.isi, scenario.sizing_policy
        )
        battery = size_battery(
            demand, timing, catalog.lookup("battery", scenario.battery_tech), scenario.dod, scenario.battery_efficiency
        )
        radiator = size_radiator(heat, catalog.lookup("radiator", scenario.radiator_tech), scenario.thermal)
    except SizingError as exc:
        raise ScenarioError(str(exc), scenario.name) from None

    bundle = catalog.lookup("platform", scenario.platform)
    comms = catalog.lookup("comms", bundle.comms) if bundle.comms else None
    plat = platform_carbon(comms, bundle.satellite_manu, bundle.satellite_mass)

    masses = [
        (SOLAR_LABEL, solar.mass),
        (BATTERY_LABEL, battery.mass),
        (COOLING_LABEL, radiator.mass),
        (COMPUTE_LABEL, nc.mass),
        (PLATFORM_LABEL, plat.mass),
    ]
    launch = launch_carbon(LaunchAssignment(scenario.vehicle, masses), catalog)
    manu = {
        SOLAR_LABEL: (solar.manu_carbon, CarbonMode.DERIVED),
        BATTERY_LABEL: (battery.manu_carbon, CarbonMode.DERIVED),
        COOLING_LABEL: (radiator.manu_carbon, CarbonMode.DERIVED),
        COMPUTE_LABEL: (nc.total, nc.mode),
        PLATFORM_LABEL: (plat.manu, CarbonMode.CATALOG),
    }
    items = tuple(
        ReportItem(label, manu[label][0], launch.per_item[label], manu[label][1], mass) for label, mass in masses
    )
    budget = daily_budget(solar, battery, timing, demand, scenario.dod, scenario.battery_efficiency)
    notes = ()
    if not budget.feasible:
        failed = [n for n, ok in (("sunlit", budget.sunlit_ok), ("eclipse", budget.eclipse_ok)) if not ok]
        notes = (f"power budget infeasible ({', '.join(failed)} constraint) under {scenario.sizing_policy.value}",)
    embodied = embodied_sum(items)
    return CarbonReport(
        scenario=scenario.name,
        deployment=scenario.deployment,
        items=items,
        embodied_total=embodied,
        operational_annual=0.0,
        annualized=embodied / scenario.lifetime_years,
        lifetime_years=scenario.lifetime_years,
        node_power_kw=nc.power,
        power_budget=budget,
        peripherals=(solar, battery, radiator),
        notes=notes,
    )


def per_request_carbon(report: CarbonReport, estimate: InferenceEstimate, scenario: Scenario) -> RequestCarbon:
    """Operational carbon of one request plus its time-share of embodied carbon."""
    lifetime_s = scenario.lifetime_years * SECONDS_PER_YEAR
    amortized = report.embodied_total * 1000.0 * estimate.e2e / (lifetime_s * scenario.duty_factor)
    if estimate.e2e > 0:
        prefill = amortized * estimate.ttft / estimate.e2e
        decode = amortized * (estimate.e2e - estimate.ttft) / estimate.e2e
    else:
        prefill = decode = 0.0
    operational = 0.0
    if not scenario.orbital:
        operational = estimate.inference_energy / 3.6e6 * report.grid_intensity
    return RequestCarbon(operational, amortized, prefill, decode)


@dataclass(frozen=True)
class TaskAnalysis:
    estimate: TaskEstimate
    carbon: RequestCarbon


def analyze_workload(
    scenario: Scenario,
    report: CarbonReport,
    catalog: TechnologyCatalog,
    tasks: Optional[Sequence[TaskProfile]] = None,
    calibration: Optional[Calibration] = None,
    n_requests: int = 1,
) -> list[TaskAnalysis]:
    """Per-task latency, energy and carbon on the scenario's node.

    The accelerator entry supplies throughput; node power comes from the
    evaluated scenario so hardening overheads carry into the energy figures.
    """
    model = catalog.lookup("model", scenario.model)
    accel = dataclasses.replace(catalog.lookup("accelerator", scenario.accelerator), node_power=report.node_power_kw)
    if tasks is None:
        tasks = [catalog.lookup("task", t) for t in scenario.tasks]
    out = []
    for task in tasks:
        est = estimate_task(model, accel, task, n_requests, calibration)
        out.append(TaskAnalysis(est, per_request_carbon(report, est.mean, scenario)))
    return out


def override_task_lengths(task: TaskProfile, prompt_len: Optional[int], gen_len: Optional[int]) -> TaskProfile:
    changes: dict[str, Any] = {}
    if prompt_len is not None:
        changes["prompt_len"] = TokenStats(prompt_len, prompt_len, prompt_len)
        changes["request_bytes"] = None
    if gen_len is not None:
        changes["gen_len"] = TokenStats(gen_len, gen_len, gen_len)
        changes["response_bytes"] = None
    if not changes:
        return task
    if task.prompt_len is None and "prompt_len" not in changes or task.gen_len is None and "gen_len" not in changes:
        raise WorkloadError(f"task {task.name!r} has no token statistics; ingest a measured trace (--trace)")
    return dataclasses.replace(task, **changes)


# --- comparisons and sweeps -------------------------------------------------


def lifetime_grid(scenario: Scenario, years: Sequence[float] = LIFETIME_GRID) -> list[float]:
    """Lifetimes a scenario can be evaluated at; orbital COTS stops at its hardware limit."""
    profile = hardening_preset(scenario.hardening)
    if scenario.orbital and profile.mode is Hardness.COTS:
        return [y for y in years if y <= profile.lifetime_years]
    return list(years)


@dataclass(frozen=True)
class ComparisonEntry:
    scenario: Scenario
    report: CarbonReport
    series: tuple[tuple[float, float], ...]  # (lifetime_years, annualized kgCO2e/yr)


@dataclass(frozen=True)
class Comparison:
    entries: tuple[ComparisonEntry, ...]
    # (i, j, annualized_i / annualized_j) at each scenario's own lifetime
    ratios: tuple[tuple[int, int, float], ...]


def compare(
    scenarios: Sequence[Scenario], catalog: TechnologyCatalog, years: Sequence[float] = LIFETIME_GRID
) -> Comparison:
    if len(scenarios) < 2:
        raise ScenarioError("compare needs at least two scenarios")
    entries = []
    for s in scenarios:
        report = evaluate(s, catalog)
        series = tuple((y, annualize(report, y)) for y in lifetime_grid(s, years))
        entries.append(ComparisonEntry(s, report, series))
    ratios = tuple(
        (i, j, entries[i].report.annualized / entries[j].report.annualized)
        for i, j in itertools.permutations(range(len(entries)), 2)
    )
    return Comparison(tuple(entries), ratios)


_NESTED = {"timing": OrbitTiming, "thermal": ThermalEnvironment}


def _check_path(path: str) -> None:
    head, _, rest = path.partition(".")
    top = {f.name for f in dataclasses.fields(Scenario)} - {"name"}
    if head not in top:
        raise ScenarioError(f"invalid sweep path {path!r}; fields: {sorted(top)}")
    if rest:
        if head not in _NESTED:
            raise ScenarioError(f"invalid sweep path {path!r}: {head!r} has no sub-fields")
        sub = {f.name for f in dataclasses.fields(_NESTED[head])}
        if rest not in sub:
            raise ScenarioError(f"invalid sweep path {path!r}; {head} fields: {sorted(sub)}")
    elif head in _NESTED:
        raise ScenarioError(f"invalid sweep path {path!r}: name a sub-field, e.g. {head}.{next(iter(_NESTED[head].__dataclass_fields__))}")


def with_value(scenario: Scenario, path: str, value: Any) -> Scenario:
    _check_path(path)
    head, _, rest = path.partition(".")
    if rest:
        value = dataclasses.replace(getattr(scenario, head), **{rest: value})
    return dataclasses.replace(scenario, **{head: value})


@dataclass(frozen=True)
class SweepCell:
    coords: tuple[tuple[str, Any], ...]
    report: Optional[CarbonReport] = None
    error: Optional[str] = None


def sweep(
    base: Scenario, axes: Sequence[tuple[str, Sequence[Any]]], catalog: TechnologyCatalog
) -> list[SweepCell]:
    """Evaluate the Cartesian product of axis values, row-major in axis order.

    Invalid paths raise up front; a failing cell records its error and the
    sweep continues.
    """
    for path, _ in axes:
        _check_path(path)
    cells = []
    for combo in itertools.product(*(values for _, values in axes)):
        coords = tuple((path, v) for (path, _), v in zip(axes, combo))
        try:
            s = base
            for path, v in coords:
                s = with_value(s, path, v)
            cells.append(SweepCell(coords, report=evaluate(s, catalog)))
        except (ScenarioError, CatalogError, HardwareError, SizingError, ValueError) as exc:
            cells.append(SweepCell(coords, error=str(exc)))
    return cells


# --- scenario documents ------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    out = {}
    for f in dataclasses.fields(s):
        v = getattr(s, f.name)
        if isinstance(v, Enum):
            v = v.value
        elif dataclasses.is_dataclass(v):
            v = dataclasses.asdict(v)
        elif isinstance(v, tuple):
            v = list(v)
        out[f.name] = v
    return out


_FIELDS = {f.name for f in dataclasses.fields(Scenario)}


def scenario_from_dict(
    name: str, doc: Mapping, known: Optional[Mapping[str, Mapping]] = None, _seen: tuple = ()
) -> Scenario:
    """Build a scenario; ``base`` names another scenario in ``known`` to extend."""
    doc = dict(doc)
    known = known or {}
    base_name = doc.pop("base", None)
    merged: dict[str, Any] = {}
    if base_name is not None:
        if base_name in _seen:
            raise ScenarioError(f"cyclic base reference {base_name!r}", name)
        if base_name not in known:
            raise ScenarioError(f"unknown base scenario {base_name!r}; available: {sorted(known)}", f"{name}.base")
        parent = scenario_to_dict(scenario_from_dict(base_name, known[base_name], known, _seen + (name,)))
        parent.pop("name")
        parent.pop("description", None)
        merged.update(parent)
    for key, value in doc.items():
        if key not in _FIELDS:
            raise ScenarioError(f"unknown field {key!r}", f"{name}.{key}")
        if key in _NESTED and isinstance(value, Mapping):
            value = {**merged.get(key, {}), **value}
        merged[key] = value
    merged.pop("name", None)
    try:
        for key, cls in _NESTED.items():
            if key in merged:
                sub = merged[key]
                allowed = {f.name for f in dataclasses.fields(cls)}
                bad = set(sub) - allowed
                if bad:
                    raise ScenarioError(f"unknown field(s) {sorted(bad)}", f"{name}.{key}")
                merged[key] = cls(**sub)
        return Scenario(name=name, **merged)
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(str(exc), name) from None


def _is_single(doc: Mapping) -> bool:
    return "deployment" in doc or "base" in doc or "name" in doc


def golden_documents() -> dict:
    text = resources.files("llmspace").joinpath("data/scenarios.json").read_text(encoding="utf-8")
    return json.loads(text)


def golden_scenarios() -> dict[str, Scenario]:
    docs = golden_documents()
    return {name: scenario_from_dict(name, d, docs) for name, d in docs.items()}


def load_scenarios(path: str | Path) -> dict[str, Scenario]:
    """Scenarios from a file: a single scenario document or a map of named ones."""
    try:
        doc = read_document(path)
    except CatalogError as exc:
        raise ScenarioError(exc.reason, exc.path) from None
    known = dict(golden_documents())
    if _is_single(doc):
        name = doc.get("name") or Path(path).stem
        return {name: scenario_from_dict(name, doc, known)}
    for name, d in doc.items():
        if not isinstance(d, Mapping):
            raise ScenarioError("scenario entry must be an object", f"{path}:{name}")
    known.update(doc)
    return {name: scenario_from_dict(name, d, known) for name, d in doc.items()}


def resolve_scenario(ref: str) -> Scenario:
    """A golden scenario name, a file path, or ``path#name`` for one entry of a map file."""
    path, _, entry = ref.partition("#")
    if Path(path).is_file():
        found = load_scenarios(path)
        if entry:
            if entry not in found:
                raise ScenarioError(f"no scenario {entry!r} in file; available: {sorted(found)}", path)
            return found[entry]
        if len(found) != 1:
            raise ScenarioError(f"file holds several scenarios, pick one with {path}#<name>: {sorted(found)}", path)
        return next(iter(found.values()))
    golden = golden_scenarios()
    if ref in golden:
        return golden[ref]
    raise ScenarioError(f"unknown scenario {ref!r}; shipped scenarios: {', '.join(golden)}")
