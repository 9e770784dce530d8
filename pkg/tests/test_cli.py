import csv
import io
import json

import pytest

from llmspace.cli import main
from llmspace.workload import TraceRecord, estimate_request, write_trace

UNIT_SUFFIXES = ("_kg", "_kwh", "_s", "_j", "_g_per_kwh", "_kw", "_m2", "_years", "_t", "_pct", "_tokens", "_g",
                 "_ratio", "_scale")
DIMENSIONLESS = {"schema_version", "n_requests", "index"}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, text, err = run(*argv, "--format", "json")
    assert code == 0, err
    return json.loads(text)


def test_evaluate_cots_json():
    env = run_json("evaluate", "--scenario", "starlink_v1_cots")
    assert env["schema_version"] == 1 and env["command"] == "evaluate"
    assert len(env["inputs_digest"]) == 64
    assert env["results"]["embodied_total_kg"] == pytest.approx(16570, rel=0.03)


def test_evaluate_terrestrial_table():
    code, text, _ = run("evaluate", "--scenario", "terrestrial_clean")
    assert code == 0
    assert "operational_annual_kg  1752" in text


def test_evaluate_csv():
    code, text, _ = run("evaluate", "--scenario", "starlink_v1_cots", "--format", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["label", "mode", "manu_kg", "launch_kg", "mass_kg"]
    assert [r[0] for r in rows[1:]] == ["solar array", "battery", "cooling panel", "computing HW", "net+satellite",
                                        "total"]


def test_unknown_scenario():
    code, _, err = run("evaluate", "--scenario", "atlantis")
    assert code == 1
    assert "starlink_v1_cots" in err and "terrestrial_clean" in err


def test_usage_error():
    assert run("evaluate")[0] == 1
    assert run("frobnicate")[0] == 1


def test_strict_power(tmp_path):
    assert run("evaluate", "--scenario", "starlink_v1_cots", "--strict-power")[0] == 2
    assert run("evaluate", "--scenario", "starlink_v1_cots")[0] == 0
    path = tmp_path / "ok.json"
    path.write_text(json.dumps({"base": "starlink_v1_cots", "sizing_policy": "RECHARGE_AWARE"}))
    assert run("evaluate", "--scenario", str(path), "--strict-power")[0] == 0
    assert run("evaluate", "--scenario", "terrestrial_dirty", "--strict-power")[0] == 0


def test_compare_csv_shape():
    code, text, _ = run("compare", "--scenario", "terrestrial_clean", "--scenario", "starlink_v1_radhard",
                        "--scenario", "starlink_v1_cots", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["scenario", "lifetime_years", "annualized_kg"]
    counts = {}
    for r in rows:
        counts[r["scenario"]] = counts.get(r["scenario"], 0) + 1
    assert counts == {"terrestrial_clean": 10, "starlink_v1_radhard": 10, "starlink_v1_cots": 2}


def test_compare_rad_bounds():
    env = run_json("compare", "--scenario", "starlink_v1_radl", "--scenario", "starlink_v1_radhard",
                   "--scenario", "starlink_v1_radh")
    low, mid, high = (s["embodied_total_kg"] for s in env["results"]["series"])
    assert low <= mid <= high


def test_compare_needs_two():
    assert run("compare", "--scenario", "starlink_v1_cots")[0] == 1


def test_sweep():
    env = run_json("sweep", "--scenario", "starlink_v1_radhard", "--axis", "lifetime_years=1,5,10",
                   "--axis", "solar_tech=Si,GaAs")
    cells = env["results"]
    assert [c["coords"] for c in cells[:2]] == [{"lifetime_years": 1, "solar_tech": "Si"},
                                                {"lifetime_years": 1, "solar_tech": "GaAs"}]
    assert len(cells) == 6 and all(c["error"] is None for c in cells)


def test_sweep_bad_axis():
    assert run("sweep", "--scenario", "starlink_v1_cots", "--axis", "lifetime_years")[0] == 1
    code, _, err = run("sweep", "--scenario", "starlink_v1_cots", "--axis", "bogus=1")
    assert code == 1 and "bogus" in err


def test_workload_a100_slower():
    fast = run_json("workload", "--scenario", "starlink_v1_radhard", "--task", "all")["results"]["tasks"]
    slow = run_json("workload", "--scenario", "a100_radhard", "--task", "all")["results"]["tasks"]
    assert len(fast) == len(slow) == 11
    for f, s in zip(fast, slow):
        assert f["task"] == s["task"]
        assert s["ttft_s"] / f["ttft_s"] > 1


def test_workload_single_token():
    tasks = run_json("workload", "--scenario", "starlink_v1_cots", "--task", "bank", "--gen-len", "1")["results"]["tasks"]
    assert tasks[0]["decode_energy_j"] == 0
    assert tasks[0]["gen_len_tokens"] == 1


def test_workload_trace(tmp_path, catalog):
    model, accel = catalog.lookup("model", "CodeLlama-34B"), catalog.lookup("accelerator", "H100-SXM")
    recs = []
    for p, g in [(200, 50), (1000, 400)]:
        est = estimate_request(model, accel, p, g)
        recs.append(TraceRecord(p, g, est.inference_energy, est.ttft, est.tbt))
    path = tmp_path / "trace.csv"
    write_trace(path, recs)
    res = run_json("workload", "--scenario", "starlink_v1_cots", "--task", "bank", "--trace", str(path))["results"]
    assert res["calibration"] == {"energy_scale": 1.0, "ttft_scale": 1.0, "tbt_scale": 1.0}
    assert [t["task"] for t in res["tasks"]] == ["bank", "trace"]
    code, text, _ = run("workload", "--scenario", "starlink_v1_cots", "--task", "bank", "--trace", str(path))
    assert "energy_scale=1 ttft_scale=1 tbt_scale=1" in text


def test_workload_unknown_task():
    code, _, err = run("workload", "--scenario", "starlink_v1_cots", "--task", "haiku")
    assert code == 1 and "haiku" in err


def test_validate_default():
    code, text, err = run("validate")
    assert code == 0, err
    assert "net+satellite" in text and "total" in text and "16.57" in text


def test_validate_radhard():
    env = run_json("validate", "--profile", "radhard")
    (total,) = [r for r in env["results"] if r["component"] == "total"]
    assert total["reference_t"] == 30.45
    assert abs(total["delta_pct"]) <= 5
    assert run("validate", "--profile", "all")[0] == 0


def test_validate_corrupted_catalog(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = run("validate", "--catalog", str(bad))
    assert code == 1 and "bad.json" in err
    bad.write_text(json.dumps({"solar": {"Si": {"efficiency": 1.7}}}))
    code, _, err = run("validate", "--catalog", str(bad))
    assert code == 1 and "solar.Si.efficiency" in err


def test_validate_breach(tmp_path):
    path = tmp_path / "override.json"
    path.write_text(json.dumps({"compute_node": {"DGX-H100": {"manu_override": 2000}}}))
    code, _, err = run("validate", "--catalog", str(path))
    assert code == 3
    assert "computing HW manu" in err


def test_catalog_env(tmp_path, monkeypatch):
    path = tmp_path / "override.json"
    path.write_text(json.dumps({"grid": {"clean": {"intensity": 40}}}))
    monkeypatch.setenv("LLMSPACE_CATALOG", str(path))
    env = run_json("evaluate", "--scenario", "terrestrial_clean")
    assert env["results"]["operational_annual_kg"] == pytest.approx(3504, rel=1e-12)
    monkeypatch.delenv("LLMSPACE_CATALOG")
    env2 = run_json("evaluate", "--scenario", "terrestrial_clean")
    assert env2["inputs_digest"] != env["inputs_digest"]


def _numeric_keys(obj, key=None):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _numeric_keys(v, k)
    elif isinstance(obj, list):
        for v in obj:
            yield from _numeric_keys(v, key)
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        yield key


@pytest.mark.parametrize("argv", [
    ("evaluate", "--scenario", "starlink_v1_cots"),
    ("evaluate", "--scenario", "terrestrial_dirty"),
    ("compare", "--scenario", "starlink_v1_cots", "--scenario", "terrestrial_clean"),
    ("sweep", "--scenario", "starlink_v1_radhard", "--axis", "hardening=rad-L,rad-H"),
    ("workload", "--scenario", "starlink_v1_cots", "--task", "all"),
    ("validate", "--profile", "all"),
])
def test_unit_suffixes(argv):
    env = run_json(*argv)
    for key in _numeric_keys(env["results"]):
        assert key in DIMENSIONLESS or key.endswith(UNIT_SUFFIXES), key


def test_envelope_is_sorted_json():
    code, text, _ = run("evaluate", "--scenario", "starlink_v1_cots", "--format", "json")
    assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"


def test_deterministic():
    argv = ("workload", "--scenario", "a100_radhard", "--task", "all", "--format", "json")
    assert run(*argv) == run(*argv)
