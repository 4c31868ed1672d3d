import json
import math
import os
import pathlib

import pytest

import relaysched as rs

ROOT = pathlib.Path(os.environ.get("RELAYSCHED_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
CONFIGS = ROOT / "configs"


def one_plus_one(beta=1.0):
    return [rs.FlowSpec.direct(0, 1.0), rs.FlowSpec.relayed(1, 1.0, beta)]


def test_two_user_pf():
    r = rs.fixed_point_norelay([rs.FlowSpec.direct(0, 1.0), rs.FlowSpec.direct(1, 1.0)])
    assert r["converged"]
    assert r["theta"] == pytest.approx([0.75, 0.75], abs=1e-6)


def test_relay_operating_point():
    r = rs.fixed_point_relay(one_plus_one(), rs.RelayPhaseConfig.from_alpha(0.5))
    assert r["theta"] == pytest.approx([0.7922555574, 0.4368398306], rel=1e-8)


def test_asymptote_and_sweep():
    cfg = rs.RelayPhaseConfig.from_alpha(0.5)
    assert rs.beta_asymptote(one_plus_one(), cfg) == pytest.approx([0.5, 0.5])
    rows = rs.sweep("beta", [1.0, 10.0, 100.0], one_plus_one(), cfg, jobs=2)
    direct = [row["theta"][0] for row in rows]
    assert direct == sorted(direct, reverse=True)
    with pytest.raises(ValueError):
        rs.sweep("delta", [1.0], one_plus_one(), cfg)


def test_closed_forms_and_helpers():
    three = [rs.FlowSpec.direct(i, 1.0) for i in range(3)]
    assert rs.pf_closed_form_norelay(three) == pytest.approx([11 / 18] * 3)
    assert rs.rr_closed_form([rs.FlowSpec.direct(0, 2.0)]) == pytest.approx([0.5])
    assert rs.winner_expectation(0, three, [1.0, 1.0, 1.0]) == pytest.approx(11 / 18)
    assert rs.recommended_beta(0.5, 2.0, 1.0) == pytest.approx(2.0)
    assert rs.optimal_split(2.0, 1.0) == pytest.approx(1 / 3)
    assert rs.end_to_end_efficiency(2.0, 1.0) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        rs.recommended_beta(1.0, 1.0, 1.0)


def test_monte_carlo_matches_solver():
    cfg = rs.RelayPhaseConfig.from_subframes(1, 1)
    r = rs.run_mc(one_plus_one(), cfg, slots=300_000, seed=3)
    assert sum(r["win_counts"]) == 300_000
    assert r["access_phase_wins"][1] == 0
    assert r["mean_theta"] == pytest.approx([0.7922555574, 0.4368398306], rel=0.02)


def test_cqi():
    assert rs.quantize_cqi(-7.0) == 0
    assert rs.quantize_cqi(-5.0) == 1
    assert rs.quantize_cqi(60.0) == 15


def test_simulate_and_compare():
    summary = rs.simulate((CONFIGS / "sim_1b3d2u.json").read_text())
    assert summary["half_duplex_violations"] == 0
    assert summary["relayed"]["B"]["bytes"] == 0
    assert summary["relayed"]["D"]["bytes"] == 0
    for relay in summary["relays"]:
        assert relay["arrivals"] == relay["departures"] + relay["drops"] + relay["queued"]
    assert summary["direct"]["D"]["mean_mcs"] >= summary["direct"]["U"]["mean_mcs"]

    cmp = rs.compare_plans((CONFIGS / "compare_plans.json").read_text())
    assert cmp["a"]["plan"] == "BDDDUU"
    assert cmp["metrics"]["direct_throughput"][2] in ("a", "tie")


def test_sinr_map():
    text = (CONFIGS / "map_norelay.json").read_text()
    active = rs.sinr_map(text, relays_active=True)
    silent = rs.sinr_map(text, relays_active=False)
    assert active == silent
    assert all(math.isfinite(v) for row in active for v in row)


def test_config_errors_carry_lines():
    with pytest.raises(rs.ConfigError, match=r"<string>:2"):
        rs.simulate('{\n  "geometry": 3\n}')


def test_cli_roundtrip(tmp_path):
    code, out, err = rs.run_cli(["solve", "--config", str(CONFIGS / "baseline_solve.json"), "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "theta.csv").read_text().startswith("flow_id,class,theta")
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["subcommand"] == "solve"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert rs.run_cli(["solve", "--config", str(bad), "--out", str(tmp_path / "none")])[0] == 1
    assert not (tmp_path / "none").exists()


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.json") if p.name != "schema.json"))
def test_shipped_configs_match_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((CONFIGS / "schema.json").read_text())
    jsonschema.validate(json.loads((CONFIGS / name).read_text()), schema)


def test_schema_rejects_typos():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((CONFIGS / "schema.json").read_text())
    doc = json.loads((CONFIGS / "baseline_solve.json").read_text())
    doc["betta"] = 2
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema)
