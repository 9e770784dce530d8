import json

import pytest

from llmspace.catalog import (
    CatalogError,
    ProcessNode,
    UnknownEntryError,
    build_catalog,
    load_catalog,
    lookup,
)


def test_default_solar_si(catalog):
    si = lookup(catalog, "solar", "Si")
    assert (si.areal_density, si.efficiency, si.manu_intensity) == (1.0, 0.17, 80.0)


def test_falcon9_intensity(catalog):
    f9 = lookup(catalog, "launch_vehicle", "Falcon-9")
    assert f9.intensity == 3.3e5 / 22800
    assert f9.intensity == pytest.approx(14.47, abs=5e-3)


def test_override_single_field():
    cat = load_catalog({"solar": {"Si": {"efficiency": 0.20}}})
    si = cat.lookup("solar", "Si")
    assert si.efficiency == 0.20
    assert (si.areal_density, si.manu_intensity) == (1.0, 80.0)


@pytest.mark.parametrize(
    "kind, name, expected",
    [
        ("radiator", "honeycomb", {"emissivity": 0.95, "areal_density": 2.8, "manu_intensity": 13.8}),
        ("process", "14nm", {"cpa_cots": 1.2, "cpa_radhard": 2.4}),
        ("process", "7nm", {"cpa_radhard": None}),
        ("process", "4nm", {"cpa_cots": 3.0, "cpa_radhard": None}),
        ("battery", "NMC", {"specific_mass": 4.5, "manu_intensity": 80.0, "reference_cap": 10.0}),
        ("memory", "HBM2", {"cpa_per_gb": 1.8}),
        ("memory", "MRAM-HBM", {"cpa_per_gb": 2.3}),
        ("memory", "rad-NAND", {"cpa_per_gb": 0.16}),
        ("grid", "dirty", {"intensity": 380.0}),
    ],
)
def test_table_values(catalog, kind, name, expected):
    entry = catalog.lookup(kind, name)
    for field, value in expected.items():
        assert getattr(entry, field) == value


def test_lookup_unknown_lists_candidates(catalog):
    with pytest.raises(UnknownEntryError) as exc:
        catalog.lookup("solar", "perovskite")
    assert exc.value.candidates == sorted(["Si", "GaAs", "multi-junction"])
    assert "GaAs" in str(exc.value)


def test_lookup_pure(catalog):
    assert catalog.lookup("battery", "LFP") == catalog.lookup("battery", "LFP")


def test_radhard_doubling(catalog):
    for p in catalog.sections["process"].values():
        if p.cpa_cots is not None and p.cpa_radhard is not None:
            assert p.cpa_radhard / p.cpa_cots == 2.0


def test_cots_override_rederives_radhard():
    cat = load_catalog({"process": {"14nm": {"cpa_cots": 1.5}}})
    assert cat.lookup("process", "14nm").cpa_radhard == 3.0


def test_inconsistent_radhard_cpa_rejected():
    with pytest.raises(CatalogError) as exc:
        load_catalog({"process": {"14nm": {"cpa_cots": 1.2, "cpa_radhard": 3.0}}})
    assert exc.value.path == "process.14nm.cpa_radhard"


def test_round_trip(catalog):
    text = json.dumps(catalog.to_dict())
    assert build_catalog(json.loads(text)) == catalog
    assert load_catalog(json.loads(text)) == catalog


def test_unknown_top_level_key():
    with pytest.raises(CatalogError, match="unknown top-level key 'solr'"):
        load_catalog({"solr": {}})


def test_unknown_field_names_path():
    with pytest.raises(CatalogError) as exc:
        load_catalog({"solar": {"Si": {"efficency": 0.2}}})
    assert exc.value.path == "solar.Si"


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"solar": {"Si": {"efficiency": 1.2}}}, "solar.Si.efficiency"),
        ({"radiator": {"x": {"areal_density": 1, "emissivity": 1.5, "manu_intensity": 1}}}, "radiator.x.emissivity"),
        ({"battery": {"NMC": {"specific_mass": -1}}}, "battery.NMC.specific_mass"),
        ({"grid": {"g": {"intensity": -5}}}, "grid.g.intensity"),
    ],
)
def test_invariant_violation_names_entry_and_field(doc, path):
    with pytest.raises(CatalogError) as exc:
        load_catalog(doc)
    assert exc.value.path == path


def test_new_entry_requires_all_fields():
    with pytest.raises(CatalogError) as exc:
        load_catalog({"solar": {"perovskite": {"efficiency": 0.25}}})
    assert exc.value.path == "solar.perovskite"


def test_process_needs_some_cpa():
    with pytest.raises(CatalogError):
        ProcessNode("x", 10)


def test_file_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogError) as exc:
        load_catalog(bad)
    assert exc.value.path == str(bad)


def test_yaml_override(tmp_path):
    f = tmp_path / "o.yaml"
    f.write_text("grid:\n  nuclear:\n    intensity: 12\n", encoding="utf-8")
    assert load_catalog(f).lookup("grid", "nuclear").intensity == 12


def test_catalog_is_read_only(catalog):
    with pytest.raises(TypeError):
        catalog.sections["solar"]["x"] = None
