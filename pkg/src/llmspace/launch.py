"""Launch embodied carbon: vehicle intensity (kgCO2e per kg) times payload mass."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from llmspace.catalog import TechnologyCatalog


@dataclass(frozen=True)
class LaunchItem:
    label: str
    mass: float  # kg

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError(f"launch item {self.label!r}: mass must be >= 0")


@dataclass(frozen=True)
class LaunchAssignment:
    vehicle_name: str
    items: tuple[LaunchItem, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(
            self, "items", tuple(i if isinstance(i, LaunchItem) else LaunchItem(*i) for i in self.items)
        )


@dataclass(frozen=True)
class LaunchCarbon:
    per_item: dict[str, float]
    total: float
    intensity: float


def launch_carbon(assignment: LaunchAssignment, catalog: TechnologyCatalog) -> LaunchCarbon:
    vehicle = catalog.lookup("launch_vehicle", assignment.vehicle_name)
    intensity = vehicle.intensity
    per_item: dict[str, float] = {}
    for item in assignment.items:
        per_item[item.label] = per_item.get(item.label, 0.0) + intensity * item.mass
    total_mass = sum(i.mass for i in assignment.items)
    if total_mass > vehicle.payload_capacity:
        warnings.warn(
            f"payload {total_mass:.0f} kg exceeds {vehicle.name} capacity {vehicle.payload_capacity:.0f} kg"
        )
    return LaunchCarbon(per_item, sum(per_item.values()), intensity)
