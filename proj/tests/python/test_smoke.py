import json
import math
import pathlib

import pytest

import glcorner

ROOT = pathlib.Path(__file__).resolve().parents[2]


def schema(name):
    return json.loads((ROOT / "schemas" / name).read_text())


def test_version_and_commands():
    assert glcorner.version()
    names = glcorner.command_names()
    for cmd in ("constants", "corner", "solve2d", "sweep"):
        assert cmd in names
    assert glcorner.defaults("constants")["b"]["default"] == 1.5


def test_merge_params_rejects_unknown_keys():
    assert glcorner.merge_params("constants", {"b": 1.4}, h=0.02)["h"] == 0.02
    with pytest.raises(glcorner.UsageError):
        glcorner.merge_params("constants", bogus=1)


def test_constants_record_matches_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    rec = glcorner.run("constants", h=0.05, use_cache=False, cache_dir=str(tmp_path))
    assert rec["command"] == "constants"
    assert rec["result"]["E0"] < 0
    jsonschema.validate(rec, schema("run_record.schema.json"))


def test_usage_errors_propagate():
    with pytest.raises(glcorner.UsageError):
        glcorner.run("constants", b=0.9, use_cache=False)


def test_theta0_and_surface_constants():
    assert glcorner.theta0() == pytest.approx(0.5901061257, abs=1e-8)
    c = glcorner.surface_constants(1.5, h=0.02)
    assert c["alpha0"] < 0 < c["ecorr"]
    assert len(c["t"]) == len(c["f"])
    assert glcorner.surface_constants(1.8, h=0.05)["trivial"]


def test_geometry():
    assert abs(glcorner.gauss_bonnet_defect("notched_pentagon")) < 1e-8
    assert sorted(glcorner.corners("square")) == pytest.approx([math.pi / 2] * 4)
    text = (ROOT / "data" / "polygons" / "square.json").read_text()
    assert abs(glcorner.gauss_bonnet_defect(text)) < 1e-8


def test_polygon_files_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    s = schema("polygon.schema.json")
    for f in sorted((ROOT / "data" / "polygons").glob("*.json")):
        jsonschema.validate(json.loads(f.read_text()), s)


def test_small_sweep(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    out = tmp_path / "bundle"
    summary = glcorner.sweep(
        {"command": "oned", "base": {"h": 0.05, "k": 1.0}, "grid": {"eps": [0.08, 0.04]}, "output": str(out)},
        use_cache=False,
    )
    assert summary["complete"] and summary["cells"] == 2
    bundle = json.loads((out / "bundle.json").read_text())
    jsonschema.validate(bundle, schema("sweep_bundle.schema.json"))
    for cell in sorted((out / "cells").glob("*.json")):
        jsonschema.validate(json.loads(cell.read_text()), schema("run_record.schema.json"))
