"""Technology and vehicle parameter tables.

The built-in tables ship as ``data/catalog.json``. An override document has the
same layout (a section per category, entries keyed by name) and is merged
field-by-field over the defaults: naming an existing entry replaces only the
fields given, naming a new entry must supply all required fields.

Units are fixed per field::

    solar           areal_density kg/m^2, efficiency -, manu_intensity kgCO2e/m^2
    battery         specific_mass kg/kWh, manu_intensity kgCO2e/kWh, reference_cap kWh
    radiator        areal_density kg/m^2, emissivity -, manu_intensity kgCO2e/kg
    process         feature_size nm, cpa_cots / cpa_radhard kgCO2e/cm^2
    memory          cpa_per_gb kgCO2e/GB
    launch_vehicle  per_launch_emission kgCO2e, payload_capacity kg
    comms           mass kg, manu_embodied kgCO2e
    platform        satellite_manu kgCO2e, satellite_mass kg
    grid            intensity gCO2e/kWh
    compute_node    area cm^2, capacity GB, base_mass kg, power_demand kW
    accelerator     peak_flops FLOP/s, hbm_bandwidth bytes/s, node_power kW
"""

from __future__ import annotations

import copy
import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, Optional

from llmspace.hardware import (
    ComputeNode,
    HardwareError,
    LogicDie,
    MemoryBlock,
    RadHardVariant,
)
from llmspace.workload import AcceleratorSpec, ModelSpec, TaskProfile, TokenStats, WorkloadError

RADHARD_CPA_FACTOR = 2.0


class CatalogError(ValueError):
    """Bad catalog document. ``path`` names the offending location."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        self.reason = message
        super().__init__(f"{path}: {message}" if path else message)


class UnknownEntryError(CatalogError, LookupError):
    def __init__(self, kind: str, name: str, candidates):
        self.kind = kind
        self.name = name
        self.candidates = sorted(candidates)
        super().__init__(f"unknown {kind} {name!r}; available: {', '.join(self.candidates)}", kind)


def _positive(entry, *names):
    for n in names:
        v = getattr(entry, n)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise CatalogError(f"{n} must be a positive number, got {v!r}", f"{entry.name}.{n}")


def _nonnegative(entry, *names):
    for n in names:
        v = getattr(entry, n)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
            raise CatalogError(f"{n} must be >= 0, got {v!r}", f"{entry.name}.{n}")


@dataclass(frozen=True)
class SolarTech:
    name: str
    areal_density: float
    efficiency: float
    manu_intensity: float
    source: str = ""

    def __post_init__(self):
        _positive(self, "areal_density", "efficiency", "manu_intensity")
        if not self.efficiency < 1:
            raise CatalogError("efficiency must be < 1", f"{self.name}.efficiency")


@dataclass(frozen=True)
class BatteryTech:
    name: str
    specific_mass: float
    manu_intensity: float
    reference_cap: float
    source: str = ""

    def __post_init__(self):
        _positive(self, "specific_mass", "manu_intensity", "reference_cap")


@dataclass(frozen=True)
class RadiatorTech:
    name: str
    areal_density: float
    emissivity: float
    manu_intensity: float
    source: str = ""

    def __post_init__(self):
        _positive(self, "areal_density", "emissivity", "manu_intensity")
        if not self.emissivity <= 1:
            raise CatalogError("emissivity must be <= 1", f"{self.name}.emissivity")


@dataclass(frozen=True)
class ProcessNode:
    name: str
    feature_size: float
    cpa_cots: Optional[float] = None
    cpa_radhard: Optional[float] = None
    source: str = ""

    def __post_init__(self):
        _positive(self, "feature_size")
        if self.cpa_cots is None and self.cpa_radhard is None:
            raise CatalogError("at least one of cpa_cots / cpa_radhard is required", self.name)
        for n in ("cpa_cots", "cpa_radhard"):
            if getattr(self, n) is not None:
                _positive(self, n)
        if self.cpa_cots is not None and self.cpa_radhard is not None:
            expected = RADHARD_CPA_FACTOR * self.cpa_cots
            if not math.isclose(self.cpa_radhard, expected, rel_tol=1e-9):
                raise CatalogError(
                    f"cpa_radhard must be {RADHARD_CPA_FACTOR:g} x cpa_cots = {expected:g}, got {self.cpa_radhard:g}",
                    f"{self.name}.cpa_radhard",
                )

    @property
    def radhard_available(self) -> bool:
        return self.cpa_radhard is not None


class MemoryKind(str, Enum):
    DDR = "DDR"
    HBM = "HBM"
    NAND = "NAND"


@dataclass(frozen=True)
class MemoryTech:
    name: str
    kind: MemoryKind
    hardness: str
    cpa_per_gb: float
    radhard_equivalent: Optional[str] = None
    source: str = ""

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", MemoryKind(self.kind))
        except ValueError:
            raise CatalogError(f"kind must be one of DDR/HBM/NAND, got {self.kind!r}", f"{self.name}.kind") from None
        if self.hardness not in ("COTS", "RAD_HARD"):
            raise CatalogError(f"hardness must be COTS or RAD_HARD, got {self.hardness!r}", f"{self.name}.hardness")
        _positive(self, "cpa_per_gb")


@dataclass(frozen=True)
class LaunchVehicle:
    name: str
    per_launch_emission: float
    payload_capacity: float
    source: str = ""

    def __post_init__(self):
        _positive(self, "per_launch_emission", "payload_capacity")

    @property
    def intensity(self) -> float:
        """kgCO2e per kg of payload."""
        return self.per_launch_emission / self.payload_capacity


@dataclass(frozen=True)
class CommsPayload:
    name: str
    mass: float
    manu_embodied: float
    description: str = ""
    source: str = ""

    def __post_init__(self):
        _nonnegative(self, "mass", "manu_embodied")


@dataclass(frozen=True)
class PlatformBundle:
    name: str
    comms: Optional[str]
    satellite_manu: float
    satellite_mass: float
    source: str = ""

    def __post_init__(self):
        _nonnegative(self, "satellite_manu", "satellite_mass")


@dataclass(frozen=True)
class GridProfile:
    name: str
    intensity: float  # gCO2e/kWh
    source: str = ""

    def __post_init__(self):
        _nonnegative(self, "intensity")


def _node_from_dict(name: str, d: dict) -> ComputeNode:
    d = dict(d)
    d["logic"] = [LogicDie(**x) for x in d.get("logic", [])]
    d["memory"] = [MemoryBlock(**x) for x in d.get("memory", [])]
    if d.get("radhard") is not None:
        d["radhard"] = RadHardVariant(**d["radhard"])
    return ComputeNode(name=name, **d)


def _node_to_dict(node: ComputeNode) -> dict:
    return {
        "logic": [dataclasses.asdict(x) for x in node.logic],
        "memory": [dataclasses.asdict(x) for x in node.memory],
        "storage_gb": node.storage_gb,
        "storage_tech": node.storage_tech,
        "base_mass": node.base_mass,
        "power_demand": node.power_demand,
        "manu_override": node.manu_override,
        "radhard": None if node.radhard is None else dataclasses.asdict(node.radhard),
        "source": node.source,
    }


def _task_from_dict(name: str, d: dict) -> TaskProfile:
    d = dict(d)
    for key in ("prompt_len", "gen_len"):
        if d.get(key) is not None:
            d[key] = TokenStats(**d[key])
    return TaskProfile(name=name, **d)


def _task_to_dict(task: TaskProfile) -> dict:
    out = dataclasses.asdict(task)
    out.pop("name")
    return out


def _plain_to_dict(entry) -> dict:
    out = {}
    for f in dataclasses.fields(entry):
        if f.name == "name":
            continue
        v = getattr(entry, f.name)
        out[f.name] = v.value if isinstance(v, Enum) else v
    return out


# section -> (entry type, from_dict, to_dict)
SECTIONS: dict[str, tuple[type, Any, Any]] = {
    "solar": (SolarTech, None, None),
    "battery": (BatteryTech, None, None),
    "radiator": (RadiatorTech, None, None),
    "process": (ProcessNode, None, None),
    "memory": (MemoryTech, None, None),
    "launch_vehicle": (LaunchVehicle, None, None),
    "comms": (CommsPayload, None, None),
    "platform": (PlatformBundle, None, None),
    "grid": (GridProfile, None, None),
    "compute_node": (ComputeNode, _node_from_dict, _node_to_dict),
    "model": (ModelSpec, None, None),
    "accelerator": (AcceleratorSpec, None, None),
    "task": (TaskProfile, _task_from_dict, _task_to_dict),
}

# lookup(kind, ...) accepts the section name or these aliases
KIND_ALIASES = {"vehicle": "launch_vehicle", "node": "compute_node"}


def _build_entry(section: str, name: str, fields: dict):
    cls, from_dict, _ = SECTIONS[section]
    path = f"{section}.{name}"
    if not isinstance(fields, dict):
        raise CatalogError("entry must be an object", path)
    allowed = {f.name for f in dataclasses.fields(cls)} - {"name", "hardening"}
    unknown = set(fields) - allowed
    if unknown:
        raise CatalogError(f"unknown field(s) {sorted(unknown)}; allowed: {sorted(allowed)}", path)
    try:
        if from_dict is not None:
            return from_dict(name, fields)
        return cls(name=name, **fields)
    except CatalogError as exc:
        raise CatalogError(exc.reason, f"{section}.{exc.path}" if exc.path else path) from None
    except (TypeError, HardwareError, WorkloadError) as exc:
        raise CatalogError(str(exc), path) from None


@dataclass(frozen=True)
class TechnologyCatalog:
    """Immutable set of named entries per section."""

    sections: Mapping[str, Mapping[str, Any]]

    def lookup(self, kind: str, name: str):
        section = KIND_ALIASES.get(kind, kind)
        if section not in self.sections:
            raise CatalogError(f"unknown catalog category {kind!r}; available: {sorted(SECTIONS)}")
        entries = self.sections[section]
        try:
            return entries[name]
        except KeyError:
            raise UnknownEntryError(section, name, entries) from None

    def names(self, kind: str) -> list[str]:
        return list(self.sections[KIND_ALIASES.get(kind, kind)])

    def radhard_processes(self) -> list[str]:
        return [n for n, p in self.sections["process"].items() if p.radhard_available]

    def to_dict(self) -> dict:
        out = {}
        for section, entries in self.sections.items():
            to_dict = SECTIONS[section][2] or _plain_to_dict
            out[section] = {name: to_dict(e) for name, e in entries.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, TechnologyCatalog) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))


def read_document(source: str | Path) -> dict:
    """Parse a JSON or YAML document from a path."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read: {exc.strerror}", str(path)) from None
    try:
        if path.suffix in (".yaml", ".yml"):
            import yaml

            doc = yaml.safe_load(text)
        else:
            doc = json.loads(text)
    except Exception as exc:
        raise CatalogError(f"parse error: {exc}", str(path)) from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise CatalogError("top level must be an object", str(path))
    return doc


def default_document() -> dict:
    text = resources.files("llmspace").joinpath("data/catalog.json").read_text(encoding="utf-8")
    return json.loads(text)


def _merge_fields(section: str, base: dict, override: dict) -> dict:
    merged = {**base, **override}
    if section == "process" and "cpa_cots" in override and "cpa_radhard" not in override:
        # keep the doubling rule when only the COTS CPA is changed
        if base.get("cpa_radhard") is not None and override["cpa_cots"] is not None:
            merged["cpa_radhard"] = RADHARD_CPA_FACTOR * override["cpa_cots"]
    return merged


def merge_documents(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for section, entries in override.items():
        if section not in SECTIONS:
            raise CatalogError(f"unknown top-level key {section!r}; allowed: {sorted(SECTIONS)}", section)
        if not isinstance(entries, dict):
            raise CatalogError("section must be an object of named entries", section)
        target = merged.setdefault(section, {})
        for name, fields in entries.items():
            if not isinstance(fields, dict):
                raise CatalogError("entry must be an object", f"{section}.{name}")
            target[name] = _merge_fields(section, target.get(name, {}), fields)
    return merged


def build_catalog(document: dict) -> TechnologyCatalog:
    sections = {}
    for section in SECTIONS:
        entries = document.get(section, {}) or {}
        built = {name: _build_entry(section, name, fields) for name, fields in entries.items()}
        sections[section] = MappingProxyType(built)
    for section in document:
        if section not in SECTIONS:
            raise CatalogError(f"unknown top-level key {section!r}; allowed: {sorted(SECTIONS)}", section)
    return TechnologyCatalog(MappingProxyType(sections))


def load_catalog(source: str | Path | Mapping | None = None) -> TechnologyCatalog:
    """Built-in defaults overridden by ``source`` (path, mapping, or None)."""
    if source is None:
        override = {}
    elif isinstance(source, Mapping):
        override = dict(source)
    else:
        override = read_document(source)
    return build_catalog(merge_documents(default_document(), override))


def lookup(catalog: TechnologyCatalog, kind: str, name: str):
    return catalog.lookup(kind, name)


def dump_catalog(catalog: TechnologyCatalog, path: str | Path) -> None:
    Path(path).write_text(json.dumps(catalog.to_dict(), indent=2) + "\n", encoding="utf-8")
