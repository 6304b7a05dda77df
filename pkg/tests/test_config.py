import json

import pytest

from skinmask.classifier import BoundaryLine, DEFAULT_CONFIG, ThresholdConfig
from skinmask.color import YCbCrMode


def test_defaults_are_the_published_constants():
    cfg = ThresholdConfig()
    assert (cfg.h_min, cfg.h_max) == (0.0, 50.0)
    assert (cfg.s_min, cfg.s_max) == (0.23, 0.68)
    assert (cfg.r_min, cfg.g_min, cfg.b_min) == (95, 40, 20)
    assert (cfg.rg_gap_min, cfg.a_min) == (15, 15)
    assert (cfg.y_min, cfg.cr_min, cfg.cb_min) == (80.0, 135.0, 85.0)
    assert cfg.line_coeffs == (
        BoundaryLine(1.5862, 20.0, "le"),
        BoundaryLine(0.3448, 76.2069, "ge"),
        BoundaryLine(-4.5652, 234.5652, "ge"),
        BoundaryLine(-1.15, 301.75, "le"),
        BoundaryLine(-2.2857, 432.85, "le"),
    )
    assert cfg.ycbcr_mode is YCbCrMode.DIGITAL


def test_json_round_trip():
    cfg = ThresholdConfig(s_max=0.7, ycbcr_mode=YCbCrMode.PAPER_LITERAL)
    again = ThresholdConfig.from_json(cfg.to_json())
    assert again == cfg


def test_partial_document_keeps_defaults():
    cfg = ThresholdConfig.from_json('{"r_min": 100, "h_max": 45.0}')
    assert cfg.r_min == 100 and cfg.h_max == 45.0
    assert cfg.s_min == DEFAULT_CONFIG.s_min
    assert cfg.line_coeffs == DEFAULT_CONFIG.line_coeffs


def test_empty_document_is_all_defaults():
    assert ThresholdConfig.from_json("{}") == DEFAULT_CONFIG


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown"):
        ThresholdConfig.from_json('{"rmin": 100}')


def test_mode_accepts_string():
    cfg = ThresholdConfig.from_json('{"ycbcr_mode": "paper-literal"}')
    assert cfg.ycbcr_mode is YCbCrMode.PAPER_LITERAL
    with pytest.raises(ValueError):
        ThresholdConfig.from_json('{"ycbcr_mode": "studio"}')


def test_lines_from_dicts_and_lists():
    doc = {
        "line_coeffs": [
            {"slope": 1.0, "intercept": 2.0, "direction": "le"},
            [0.5, 70.0, "ge"],
            {"slope": -4.0, "intercept": 230.0, "direction": "ge"},
            [-1.0, 300.0, "le"],
            [-2.0, 430.0, "le"],
        ]
    }
    cfg = ThresholdConfig.from_dict(doc)
    assert cfg.line_coeffs[0] == BoundaryLine(1.0, 2.0, "le")
    assert cfg.line_coeffs[1] == BoundaryLine(0.5, 70.0, "ge")


def test_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"a_min": 0}))
    assert ThresholdConfig.from_file(path).a_min == 0


def test_serialized_form_is_flat_with_field_names():
    d = ThresholdConfig().to_dict()
    assert set(d) == {
        "h_min", "h_max", "s_min", "s_max", "r_min", "g_min", "b_min",
        "rg_gap_min", "a_min", "y_min", "cr_min", "cb_min", "line_coeffs",
        "ycbcr_mode",
    }
    assert d["ycbcr_mode"] == "digital"
    assert all(set(line) == {"slope", "intercept", "direction"} for line in d["line_coeffs"])
