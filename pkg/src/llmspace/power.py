"""Daily energy budget and power-system feasibility for one orbit configuration."""

from __future__ import annotations

from dataclasses import dataclass

from llmspace.peripherals import OrbitTiming, SizedPeripheral

# slack for float round-off when a sizing policy hits a constraint with equality
_REL_TOL = 1e-9


@dataclass(frozen=True)
class PowerBudget:
    solar_daily: float  # kWh/day, P * N_cyc * T_lit
    battery_daily: float  # kWh/day, N_cyc * cap * DoD
    demand_daily: float  # kWh/day
    feasible: bool
    slack: float  # kWh/day, solar_daily - demand_daily
    sunlit_ok: bool
    eclipse_ok: bool


def _at_least(value: float, required: float) -> bool:
    return value >= required - _REL_TOL * abs(required)


def daily_budget(
    solar: SizedPeripheral,
    battery: SizedPeripheral,
    timing: OrbitTiming,
    demand: float,
    dod: float = 0.8,
    efficiency: float = 1.0,
) -> PowerBudget:
    """Check that the array covers load plus recharge and the battery covers eclipse.

    Infeasibility is reported in the result, never raised.
    """
    p = solar.power_kw
    cap = battery.sizing
    solar_daily = p * timing.cycles_per_day * timing.sunlit_hours
    battery_daily = timing.cycles_per_day * cap * dod
    demand_daily = demand * 24.0
    # instantaneous balance over one orbit: sunlit generation feeds load and refills the eclipse draw
    sunlit_ok = _at_least(p * timing.sunlit_minutes, demand * timing.period_minutes)
    eclipse_ok = _at_least(cap * dod * efficiency, demand * timing.eclipse_hours)
    return PowerBudget(
        solar_daily=solar_daily,
        battery_daily=battery_daily,
        demand_daily=demand_daily,
        feasible=sunlit_ok and eclipse_ok,
        slack=solar_daily - demand_daily,
        sunlit_ok=sunlit_ok,
        eclipse_ok=eclipse_ok,
    )
