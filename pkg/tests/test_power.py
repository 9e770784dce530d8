import pytest
from hypothesis import given
from hypothesis import strategies as st

from llmspace.peripherals import OrbitTiming, SizingPolicy, size_battery, size_solar
from llmspace.power import daily_budget

TIMING = OrbitTiming()


def _system(catalog, demand, policy=SizingPolicy.DEMAND_MATCH, timing=TIMING, solar="Si", battery="NMC"):
    s = size_solar(demand, timing, catalog.lookup("solar", solar), policy=policy)
    b = size_battery(demand, timing, catalog.lookup("battery", battery), 0.8)
    return s, b


def test_demand_match_infeasible(catalog):
    s, b = _system(catalog, 10)
    budget = daily_budget(s, b, TIMING, 10, 0.8)
    assert budget.solar_daily == pytest.approx(10 * (1440 / 95) * 1.0, rel=1e-12)
    assert budget.solar_daily == pytest.approx(151.6, rel=1e-3)
    assert budget.eclipse_ok  # holds with equality
    assert not budget.sunlit_ok
    assert not budget.feasible
    assert budget.slack == pytest.approx(budget.solar_daily - 240, rel=1e-12)


def test_recharge_aware_feasible(catalog):
    s, b = _system(catalog, 10, SizingPolicy.RECHARGE_AWARE)
    budget = daily_budget(s, b, TIMING, 10, 0.8)
    assert s.power_kw == pytest.approx(15.83, rel=1e-3)
    assert budget.solar_daily == pytest.approx(240, rel=1e-12)
    assert budget.feasible


def test_zero_demand(catalog):
    s, b = _system(catalog, 10)
    budget = daily_budget(s, b, TIMING, 0, 0.8)
    assert budget.feasible
    assert budget.slack == budget.solar_daily


def test_battery_efficiency_breaks_lossless_sizing(catalog):
    s, b = _system(catalog, 10, SizingPolicy.RECHARGE_AWARE)
    assert not daily_budget(s, b, TIMING, 10, 0.8, efficiency=0.9).eclipse_ok


timings = st.builds(
    OrbitTiming,
    cycles_per_day=st.floats(13.5, 14.4),
    sunlit_minutes=st.floats(55, 65),
    eclipse_minutes=st.floats(30, 35),
)


@given(demand=st.floats(0.01, 100), timing=timings, solar=st.sampled_from(["Si", "GaAs", "multi-junction"]),
       battery=st.sampled_from(["LFP", "NMC", "rad-hard"]), policy=st.sampled_from(list(SizingPolicy)))
def test_budget_identities(catalog, demand, timing, solar, battery, policy):
    s, b = _system(catalog, demand, policy, timing, solar, battery)
    budget = daily_budget(s, b, timing, demand, 0.8)
    assert budget.solar_daily == pytest.approx(s.power_kw * timing.cycles_per_day * timing.sunlit_minutes / 60, rel=1e-9)
    assert budget.battery_daily == pytest.approx(timing.cycles_per_day * b.sizing * 0.8, rel=1e-9)
    if policy is SizingPolicy.RECHARGE_AWARE:
        assert budget.feasible


@given(demand=st.floats(0.01, 100), grow_solar=st.floats(1.0, 3.0), grow_batt=st.floats(1.0, 3.0),
       policy=st.sampled_from(list(SizingPolicy)))
def test_feasibility_monotone(catalog, demand, grow_solar, grow_batt, policy):
    s, b = _system(catalog, demand, policy)
    before = daily_budget(s, b, TIMING, demand, 0.8).feasible
    s2 = size_solar(demand * grow_solar, TIMING, catalog.lookup("solar", "Si"), policy=policy)
    b2 = size_battery(demand * grow_batt, TIMING, catalog.lookup("battery", "NMC"), 0.8)
    after = daily_budget(s2, b2, TIMING, demand, 0.8).feasible
    assert not (before and not after)
