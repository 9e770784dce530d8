"""Solar array, battery and radiator sizing with mass and manufacturing carbon."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from llmspace.catalog import BatteryTech, RadiatorTech, SolarTech

STEFAN_BOLTZMANN = 5.670374419e-8  # W/(m^2 K^4)
SOLAR_IRRADIANCE = 1367.0  # W/m^2 at Earth orbit
MINUTES_PER_DAY = 1440.0


class SizingError(ValueError):
    pass


class DegenerateThermalError(SizingError):
    pass


class PeripheralKind(str, Enum):
    SOLAR = "SOLAR"
    BATTERY = "BATTERY"
    RADIATOR = "RADIATOR"


class SizingPolicy(str, Enum):
    """How much array power a given demand calls for.

    DEMAND_MATCH sizes the array to the load alone. RECHARGE_AWARE also
    refills the battery during the sunlit part of the orbit.
    """

    DEMAND_MATCH = "DEMAND_MATCH"
    RECHARGE_AWARE = "RECHARGE_AWARE"


@dataclass(frozen=True)
class OrbitTiming:
    cycles_per_day: float = MINUTES_PER_DAY / 95.0
    sunlit_minutes: float = 60.0
    eclipse_minutes: float = 35.0

    def __post_init__(self):
        if min(self.cycles_per_day, self.sunlit_minutes, self.eclipse_minutes) <= 0:
            raise SizingError("orbit timing values must be positive")
        if self.cycles_per_day * self.period_minutes > MINUTES_PER_DAY * (1 + 1e-12):
            raise SizingError(
                f"{self.cycles_per_day} cycles of {self.period_minutes} min exceed one day"
            )
        if not 85.0 <= self.period_minutes <= 105.0:
            warnings.warn(f"orbit period {self.period_minutes} min is outside the LEO range 85-105 min")

    @property
    def period_minutes(self) -> float:
        return self.sunlit_minutes + self.eclipse_minutes

    @property
    def sunlit_hours(self) -> float:
        return self.sunlit_minutes / 60.0

    @property
    def eclipse_hours(self) -> float:
        return self.eclipse_minutes / 60.0


@dataclass(frozen=True)
class ThermalEnvironment:
    # 236.4 K makes a 10 kW honeycomb panel come out at ~59.4 m^2
    radiator_temp: float = 236.4  # K
    background_temp: float = 3.0  # K
    sigma: float = STEFAN_BOLTZMANN

    def __post_init__(self):
        if not self.radiator_temp > self.background_temp >= 0:
            raise DegenerateThermalError(
                f"need radiator_temp > background_temp >= 0, got {self.radiator_temp} K / {self.background_temp} K"
            )


@dataclass(frozen=True)
class SizedPeripheral:
    kind: PeripheralKind
    tech_name: str
    sizing: float  # m^2 for solar/radiator, kWh for battery
    mass: float  # kg
    manu_carbon: float  # kgCO2e
    power_kw: Optional[float] = None  # generated power, solar only


def solar_power_target(demand: float, timing: OrbitTiming, policy: SizingPolicy) -> float:
    if SizingPolicy(policy) is SizingPolicy.RECHARGE_AWARE:
        return demand * timing.period_minutes / timing.sunlit_minutes
    return demand


def size_solar(
    demand: float,
    timing: OrbitTiming,
    tech: SolarTech,
    isi: float = SOLAR_IRRADIANCE,
    policy: SizingPolicy = SizingPolicy.DEMAND_MATCH,
) -> SizedPeripheral:
    """Array area for ``demand`` kW; P = isi * A * efficiency."""
    if not demand > 0:
        raise SizingError(f"demand must be positive, got {demand}")
    if not isi > 0:
        raise SizingError(f"irradiance must be positive, got {isi}")
    power = solar_power_target(demand, timing, policy)
    area = power * 1000.0 / (isi * tech.efficiency)
    return SizedPeripheral(
        PeripheralKind.SOLAR,
        tech.name,
        area,
        tech.areal_density * area,
        tech.manu_intensity * area,
        power_kw=isi * area * tech.efficiency / 1000.0,
    )


def size_battery(
    demand: float,
    timing: OrbitTiming,
    tech: BatteryTech,
    dod: float = 0.8,
    efficiency: float = 1.0,
) -> SizedPeripheral:
    """Capacity that carries ``demand`` kW through one eclipse at depth of discharge ``dod``."""
    if not 0 < dod <= 1:
        raise SizingError(f"dod must be in (0, 1], got {dod}")
    if not 0 < efficiency <= 1:
        raise SizingError(f"battery efficiency must be in (0, 1], got {efficiency}")
    if not demand > 0:
        raise SizingError(f"demand must be positive, got {demand}")
    cap = demand * timing.eclipse_hours / (dod * efficiency)
    return SizedPeripheral(
        PeripheralKind.BATTERY, tech.name, cap, tech.specific_mass * cap, tech.manu_intensity * cap
    )


def radiator_area(heat_load: float, emissivity: float, env: ThermalEnvironment) -> float:
    return heat_load * 1000.0 / (
        emissivity * env.sigma * (env.radiator_temp**4 - env.background_temp**4)
    )


def size_radiator(heat_load: float, tech: RadiatorTech, env: ThermalEnvironment) -> SizedPeripheral:
    """Radiating area that rejects ``heat_load`` kW to the background."""
    if not heat_load > 0:
        raise SizingError(f"heat load must be positive, got {heat_load}")
    if not env.radiator_temp > env.background_temp:
        raise DegenerateThermalError("radiator must be hotter than the background")
    area = radiator_area(heat_load, tech.emissivity, env)
    mass = tech.areal_density * area
    if not math.isfinite(area):
        raise DegenerateThermalError(f"non-finite radiator area for {env}")
    return SizedPeripheral(PeripheralKind.RADIATOR, tech.name, area, mass, tech.manu_intensity * mass)
