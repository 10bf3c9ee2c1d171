"""Tests for JSON, CSV and SVG report writers."""
import json
import math

import pytest

from src.utils.reports import ensure_dir, write_csv, write_json, write_svg_plot


def test_json_sorted_and_non_finite(tmp_path):
    path = write_json({"b": 1.5, "a": {"inf": math.inf, "nan": math.nan}}, tmp_path / "r.json")
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": {"inf": "inf", "nan": None}, "b": 1.5}


def test_json_is_reproducible(tmp_path):
    doc = {"x": [0.1, 0.2], "y": {"z": 3}}
    first = write_json(doc, tmp_path / "1.json").read_bytes()
    assert write_json(doc, tmp_path / "2.json").read_bytes() == first


def test_csv_columns(tmp_path):
    path = write_csv([{"T": 50.0, "D": 0.1}, {"T": 100.0, "J": 2}], tmp_path / "t.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "D,J,T"
    assert lines[1] == "0.1,,50.0"
    assert lines[2] == ",2,100.0"


def test_csv_explicit_columns(tmp_path):
    path = write_csv([{"T": 50.0, "D": 0.1}], tmp_path / "t.csv", columns=["T"])
    assert path.read_text().splitlines() == ["T", "50.0"]


def test_svg(tmp_path):
    path = write_svg_plot({"D": ([50, 100, 200], [0.3, 0.2, math.nan])}, tmp_path / "p.svg",
                          title="D <T>", y_label="D")
    text = path.read_text()
    assert text.startswith("<svg")
    assert "D &lt;T&gt;" in text
    assert text.count("<polyline") == 1


def test_svg_needs_points(tmp_path):
    with pytest.raises(ValueError):
        write_svg_plot({"D": ([], [])}, tmp_path / "p.svg", title="t", y_label="y")


def test_ensure_dir(tmp_path):
    target = ensure_dir(tmp_path / "a" / "b")
    assert target.is_dir()
    assert ensure_dir(target) == target
