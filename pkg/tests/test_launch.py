import pytest
from hypothesis import given
from hypothesis import strategies as st

from llmspace.catalog import UnknownEntryError
from llmspace.launch import LaunchAssignment, LaunchItem, launch_carbon

I_L = 3.3e5 / 22800


def test_dgx_launch(catalog):
    lc = launch_carbon(LaunchAssignment("Falcon-9", [("computing HW", 130)]), catalog)
    assert lc.total == pytest.approx(130 * I_L, rel=1e-12)
    assert lc.total == pytest.approx(1890, rel=0.01)


def test_empty(catalog):
    assert launch_carbon(LaunchAssignment("Falcon-9", []), catalog).total == 0


def test_peripheral_masses(catalog):
    solar, battery = 10000 / (1367 * 0.17), 4.5 * 10 * (35 / 60) / 0.8
    lc = launch_carbon(LaunchAssignment("Falcon-9", [("solar", solar), ("battery", battery)]), catalog)
    assert lc.per_item["solar"] == pytest.approx(solar * I_L, rel=1e-12)
    assert lc.total == pytest.approx((solar + battery) * I_L, rel=1e-12)
    assert (lc.per_item["solar"], lc.per_item["battery"]) == pytest.approx((622.6, 474.8), rel=1e-3)
    assert lc.total == pytest.approx(1097.4, rel=1e-3)


def test_unknown_vehicle(catalog):
    with pytest.raises(UnknownEntryError):
        launch_carbon(LaunchAssignment("Saturn-V", []), catalog)


def test_negative_mass():
    with pytest.raises(ValueError):
        LaunchItem("x", -1)


def test_over_capacity_warns(catalog):
    with pytest.warns(UserWarning, match="exceeds"):
        launch_carbon(LaunchAssignment("Falcon-9", [("big", 30000)]), catalog)


masses = st.lists(st.floats(min_value=0, max_value=1000, allow_nan=False, allow_subnormal=False), max_size=8)


@given(a=masses, b=masses)
def test_additive(catalog, a, b):
    ia = [(f"a{i}", m) for i, m in enumerate(a)]
    ib = [(f"b{i}", m) for i, m in enumerate(b)]
    both = launch_carbon(LaunchAssignment("Falcon-9", ia + ib), catalog).total
    split = launch_carbon(LaunchAssignment("Falcon-9", ia), catalog).total + launch_carbon(
        LaunchAssignment("Falcon-9", ib), catalog
    ).total
    assert both == pytest.approx(split, rel=1e-12, abs=1e-9)


@given(a=masses)
def test_doubling(catalog, a):
    items = [(f"i{i}", m) for i, m in enumerate(a)]
    once = launch_carbon(LaunchAssignment("Falcon-9", items), catalog).total
    twice = launch_carbon(LaunchAssignment("Falcon-9", [(n, 2 * m) for n, m in items]), catalog).total
    assert twice == 2 * once
