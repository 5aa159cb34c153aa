import json
from dataclasses import replace
from fractions import Fraction

import pytest

from hkatomic.config import (
    ConfigError,
    ScenarioConfig,
    config_from_dict,
    config_to_dict,
    default_manifold,
    load_config,
)
from hkatomic.lattice_core import BilinearSpace
from hkatomic.report import FAIL, FLAGGED, PASS, RECORDED, ReportEntry, ScenarioReport, jsonable, same_value
from hkatomic.scenario import STEP_TITLES, run_og10_scenario


@pytest.fixture(scope="module")
def report():
    return run_og10_scenario(ScenarioConfig.default())


def test_default_config_values():
    cfg = ScenarioConfig.default()
    m = cfg.manifold
    assert (m.deformation_type, m.n, m.c_X, m.r_X) == ("K3[n]", 2, 1, Fraction(5, 4))
    assert m.ns.labels == ("lambda", "f") and m.ns.gram == ((2, 2), (2, 0))
    assert m.q2_square is None
    assert (cfg.genus, cfg.rank_hint) == (5, 5)


def test_config_round_trip():
    cfg = ScenarioConfig(replace(default_manifold(), q2_square=Fraction(23, 25)), genus=6)
    assert config_from_dict(json.loads(json.dumps(config_to_dict(cfg)))) == cfg


def test_config_defaults_from_empty():
    assert config_from_dict({}) == ScenarioConfig.default()


def test_unknown_key_is_error():
    with pytest.raises(ConfigError, match="unknown key 'gneus'"):
        config_from_dict({"gneus": 5})


def test_float_rejected():
    with pytest.raises(ConfigError, match="floats"):
        config_from_dict({"c_X": 1.0})


def test_custom_type_needs_r_x():
    with pytest.raises(ConfigError):
        config_from_dict({"type": "custom"})
    assert config_from_dict({"type": "custom", "r_X": "1/2"}).manifold.r_X == Fraction(1, 2)


def test_load_config_line_anchor(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{\n  "n": 2,\n  "ns": {\n    "labels": ["lambda", "f"],\n    "gram": [[2, 1], [2, 0]]\n  }\n}\n')
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert err.value.line == 5
    assert str(err.value).startswith(f"{p}:5: ns.gram")


def test_load_config_json_syntax(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{\n  "n": 2,\n  "genus": \n}\n')
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert err.value.line == 4


def test_default_scenario_passes(report):
    statuses = {e.status for e in report.entries}
    assert FAIL not in statuses
    assert report.ok


def test_steps_run_in_order(report):
    steps = [int(e.name.split(".")[0]) for e in report.entries]
    assert steps == sorted(steps)
    assert set(steps) == set(STEP_TITLES)


def test_key_values(report):
    assert report["05.v_F0_text"].value == "5 - 15/4*q2 + 45/32*pt"
    assert report["07.chi_F0_F0"].value == {
        "euler_formula": "27",
        "mukai_pairing": "27",
        "ext_sum": 27,
        "fourfold_square": "27",
    }
    assert report["08.ext1"].value == 10
    assert report["09.chi_G"].value == -2
    assert report["09.chi_F2"].value == 1
    assert report["07.q2_square"].value == "23/25"


def test_asserted_values_cite_routes(report):
    for e in report.entries:
        if e.status in (PASS, FAIL, FLAGGED) and not e.name.endswith("_error"):
            assert e.routes, e.name


def test_chi_has_three_routes(report):
    assert len(report["07.chi_F0_F0"].routes) >= 3


def test_caveats_present(report):
    text = " ".join(report.caveats)
    assert "Serre duality" in text
    assert "projectively" in text
    assert "square of lambda + 2f is 6" in text


def test_polarization_flagged(report):
    e = report["11.polarization"]
    assert e.status == FLAGGED
    assert same_value(e.value, {"square": 10, "divisibility": 2})


def test_report_round_trip(report):
    again = ScenarioReport.from_json(report.to_json())
    assert again == report


def test_report_deterministic(report):
    assert run_og10_scenario().to_json() == report.to_json()


def test_report_has_no_floats(report):
    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(report.to_json()))


def test_modified_gram_reports_construction_error():
    cfg = config_from_dict({"ns": {"labels": ["lambda", "f"], "gram": [[4, 2], [2, 0]]}})
    rep = run_og10_scenario(cfg)
    err = rep["03.poincare_error"]
    assert err.status == FAIL and err.value.startswith("ConstructionError")
    # later steps still run
    assert rep["08.ext1"].status == PASS
    assert rep["11.polarization"].status in (FLAGGED, FAIL)
    assert not rep.ok


def test_genus_changes_ext_step():
    rep = run_og10_scenario(ScenarioConfig(default_manifold(), genus=6))
    assert rep["08.ext1"].value == 12 and rep["08.ext1"].status == FAIL
    assert rep["07.chi_F0_F0"].status == FAIL
    assert rep["05.v_F0"].status == PASS


def test_entry_rejects_bad_status():
    with pytest.raises(ValueError):
        ReportEntry("x", 1, status="maybe")


def test_jsonable_rejects_float():
    with pytest.raises(TypeError):
        jsonable(0.5)


def test_same_value_semantics():
    assert same_value({"a": [1, "3/2"]}, {"a": ["1", "6/4"]})
    assert not same_value(True, 1)
    assert not same_value([1], [1, 2])


def test_text_rendering(report):
    text = report.render_text()
    assert text.splitlines()[-1].endswith("0 fail, 1 flagged, 11 recorded")
    assert "[ flagged] 11.polarization" in text
