"""Embodied carbon of compute and communication hardware.

Logic carbon is carbon-per-area times die area; memory and storage carbon is
carbon-per-GB times capacity. Auxiliary parts of a compute node (PCBs,
passives, structure) are 10% of the node total, so the node total is the sum
of its device carbon divided by 0.9.

A node can instead carry a vendor aggregate (``manu_override``). That value is
used as-is and the report marks the item ``CATALOG`` instead of ``BOTTOM_UP``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from llmspace.catalog import TechnologyCatalog

AUXILIARY_FRACTION = 0.10


class HardwareError(ValueError):
    """Invalid hardware description or unsupported hardening request."""


class UnsupportedProcessError(HardwareError):
    """Rad-hard logic requested at a node with no rad-hard CPA."""


class Hardness(str, Enum):
    COTS = "COTS"
    RAD_HARD = "RAD_HARD"


class CarbonMode(str, Enum):
    CATALOG = "CATALOG"
    BOTTOM_UP = "BOTTOM_UP"
    DERIVED = "DERIVED"


@dataclass(frozen=True)
class HardeningProfile:
    mode: Hardness = Hardness.COTS
    area_scale: float = 1.0
    power_scale: float = 1.0
    lifetime_years: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Hardness(self.mode))
        if self.mode is Hardness.COTS:
            if self.area_scale != 1.0 or self.power_scale != 1.0:
                raise HardwareError("COTS hardening must have area_scale = power_scale = 1")
            if self.lifetime_years > 2.0:
                raise HardwareError(
                    f"COTS hardware lifetime_years={self.lifetime_years} exceeds the 2-year LEO limit"
                )
        elif self.area_scale < 1.0 or self.power_scale < 1.0:
            raise HardwareError("RAD_HARD scales must be >= 1")
        if self.lifetime_years <= 0:
            raise HardwareError("lifetime_years must be positive")


HARDENING_PRESETS: dict[str, HardeningProfile] = {
    "cots": HardeningProfile(Hardness.COTS, 1.0, 1.0, 2.0),
    "rad-hard": HardeningProfile(Hardness.RAD_HARD, 15.0, 2.0, 10.0),
    "rad-L": HardeningProfile(Hardness.RAD_HARD, 10.0, 1.5, 10.0),
    "rad-H": HardeningProfile(Hardness.RAD_HARD, 20.0, 3.0, 10.0),
}


def hardening_preset(name: str) -> HardeningProfile:
    try:
        return HARDENING_PRESETS[name]
    except KeyError:
        raise HardwareError(
            f"unknown hardening preset {name!r}; available: {sorted(HARDENING_PRESETS)}"
        ) from None


@dataclass(frozen=True)
class LogicDie:
    name: str
    area: float  # cm^2, per die
    process: str
    count: int = 1

    def __post_init__(self):
        if not self.area > 0:
            raise HardwareError(f"die {self.name!r}: area must be positive")
        if int(self.count) != self.count or self.count < 1:
            raise HardwareError(f"die {self.name!r}: count must be an integer >= 1")


@dataclass(frozen=True)
class MemoryBlock:
    tech: str
    capacity: float  # GB

    def __post_init__(self):
        if not self.capacity > 0:
            raise HardwareError(f"memory block {self.tech!r}: capacity must be positive")


@dataclass(frozen=True)
class RadHardVariant:
    """How a node changes when hardened.

    ``manu_override`` is the vendor-style aggregate valid at
    ``reference_area_scale``; other area scales shift it by the bottom-up
    logic-carbon difference.
    """

    process: Optional[str] = None
    manu_override: Optional[float] = None
    reference_area_scale: float = 15.0


@dataclass(frozen=True)
class ComputeNode:
    name: str
    logic: tuple[LogicDie, ...]
    memory: tuple[MemoryBlock, ...]
    storage_gb: float
    storage_tech: str
    base_mass: float  # kg
    power_demand: float  # kW, COTS
    hardening: HardeningProfile = field(default_factory=HardeningProfile)
    manu_override: Optional[float] = None  # kgCO2e
    radhard: Optional[RadHardVariant] = None
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "logic", tuple(self.logic))
        object.__setattr__(self, "memory", tuple(self.memory))
        if not self.power_demand > 0:
            raise HardwareError(f"node {self.name!r}: power_demand must be positive")
        if not self.base_mass > 0:
            raise HardwareError(f"node {self.name!r}: base_mass must be positive")
        if self.storage_gb < 0:
            raise HardwareError(f"node {self.name!r}: storage_gb must be >= 0")
        if self.manu_override is not None and not self.manu_override > 0:
            raise HardwareError(f"node {self.name!r}: manu_override must be positive")


@dataclass(frozen=True)
class NodeCarbon:
    logic: float
    memory: float
    storage: float
    auxiliary: float
    total: float
    mass: float
    power: float  # kW, after hardening power overhead
    mode: CarbonMode


@dataclass(frozen=True)
class PlatformCarbon:
    manu: float
    mass: float


def logic_carbon(die: LogicDie, hardening: HardeningProfile, catalog: TechnologyCatalog) -> float:
    node = catalog.lookup("process", die.process)
    if hardening.mode is Hardness.RAD_HARD:
        if node.cpa_radhard is None:
            raise UnsupportedProcessError(
                f"process {die.process!r} has no rad-hard option; "
                f"rad-hard-capable: {catalog.radhard_processes()}"
            )
        return die.count * node.cpa_radhard * die.area * hardening.area_scale
    if node.cpa_cots is None:
        raise UnsupportedProcessError(f"process {die.process!r} has no COTS CPA")
    return die.count * node.cpa_cots * die.area


def memory_carbon(block: MemoryBlock, catalog: TechnologyCatalog) -> float:
    return block.capacity * catalog.lookup("memory", block.tech).cpa_per_gb


def storage_carbon(capacity: float, tech: str, catalog: TechnologyCatalog) -> float:
    cpa = catalog.lookup("memory", tech).cpa_per_gb
    return capacity * cpa


def node_carbon(node: ComputeNode, catalog: TechnologyCatalog) -> NodeCarbon:
    """Itemized manufacturing carbon, mass and power draw of a compute node."""
    power = node.power_demand * node.hardening.power_scale
    if node.manu_override is not None:
        return NodeCarbon(0.0, 0.0, 0.0, 0.0, node.manu_override, node.base_mass, power, CarbonMode.CATALOG)
    logic = sum(logic_carbon(d, node.hardening, catalog) for d in node.logic)
    memory = sum(memory_carbon(b, catalog) for b in node.memory)
    storage = storage_carbon(node.storage_gb, node.storage_tech, catalog)
    total = (logic + memory + storage) / (1.0 - AUXILIARY_FRACTION)
    return NodeCarbon(
        logic, memory, storage, total * AUXILIARY_FRACTION, total, node.base_mass, power, CarbonMode.BOTTOM_UP
    )


def harden(node: ComputeNode, profile: HardeningProfile, catalog: TechnologyCatalog) -> ComputeNode:
    """Return the node as built under ``profile``.

    For RAD_HARD, logic moves to the variant's process, COTS memory and storage
    are swapped for their rad-hard equivalents, and the rad-hard aggregate (if
    any) replaces the COTS one.
    """
    if profile.mode is Hardness.COTS:
        return dataclasses.replace(node, hardening=profile)

    variant = node.radhard or RadHardVariant()
    logic = tuple(
        dataclasses.replace(d, process=variant.process) if variant.process else d for d in node.logic
    )

    def swap(tech: str) -> str:
        equivalent = catalog.lookup("memory", tech).radhard_equivalent
        return equivalent or tech

    memory = tuple(dataclasses.replace(b, tech=swap(b.tech)) for b in node.memory)

    override = None
    if variant.manu_override is not None:
        override = variant.manu_override
        if profile.area_scale != variant.reference_area_scale:
            reference = dataclasses.replace(profile, area_scale=variant.reference_area_scale)
            delta = sum(
                logic_carbon(d, profile, catalog) - logic_carbon(d, reference, catalog) for d in logic
            )
            override += delta / (1.0 - AUXILIARY_FRACTION)

    return dataclasses.replace(
        node,
        logic=logic,
        memory=memory,
        storage_tech=swap(node.storage_tech),
        hardening=profile,
        manu_override=override,
    )


def platform_carbon(comms, satellite_manu: float, satellite_mass: float) -> PlatformCarbon:
    """Joint satellite bus + communication payload. ``comms`` may be None."""
    if satellite_manu < 0 or satellite_mass < 0:
        raise HardwareError("satellite manu and mass must be >= 0")
    if comms is None:
        return PlatformCarbon(satellite_manu, satellite_mass)
    return PlatformCarbon(comms.manu_embodied + satellite_manu, comms.mass + satellite_mass)
