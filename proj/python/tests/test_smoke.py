import math
import os
from pathlib import Path

import pytest

import nnmbfl

FIXTURES = Path(os.environ.get("NNMBFL_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def test_model_roundtrip_and_forward():
    model = nnmbfl.Model.load(FIXTURES / "triangle_model.json")
    assert len(model) == 2
    assert model.layer_kinds == ["dense", "dense"]
    assert model.input_shape == [3]
    again = nnmbfl.Model.parse(model.to_json())
    assert again.to_json() == model.to_json()
    out = model.forward([1.0, 1.0, 1.0])
    assert len(out) == 2 and all(v >= 0 for v in out)


def test_demo_pool_and_selection():
    model = nnmbfl.Model.load(FIXTURES / "triangle_model.json")
    pool = nnmbfl.mutants(model, demo_profile=True)
    assert len(pool) == 12
    assert pool[0]["description"] == "halved the weights of layer 1, neuron 1"
    picked = nnmbfl.select(model, 0.5, seed=1, demo_profile=True)
    assert len(picked) == 6 and picked == sorted(picked)
    assert picked == nnmbfl.select(model, 0.5, seed=1, demo_profile=True)
    with pytest.raises(nnmbfl.InvalidFraction):
        nnmbfl.select(model, 0.0)


def test_localize_ranks_layer_two():
    result = nnmbfl.localize(FIXTURES / "triangle_model.json", FIXTURES / "triangle_data.json",
                             formula="muse", demo_profile=True)
    assert result["exit_code"] == 0
    report = result["report"]
    assert report["layers"][0]["id"] == 2
    assert report["totals"]["T_f"] == 4
    assert result["console"].startswith("layer 2 ")


def test_localize_input_error():
    result = nnmbfl.localize(FIXTURES / "missing.json", FIXTURES / "triangle_data.json")
    assert result["exit_code"] == 2
    assert result["report"] is None
    with pytest.raises(ValueError):
        nnmbfl.localize(FIXTURES / "triangle_model.json", FIXTURES / "triangle_data.json", formula="bogus")


def test_kernels():
    assert math.isclose(nnmbfl.sbi(2, 1), 2 / 3)
    assert math.isclose(nnmbfl.ochiai(2, 1, 4), 2 / math.sqrt(12))
    assert nnmbfl.muse_alpha(2, 1, 4, 2) == 1.0
    assert nnmbfl.muse_alpha(2, 0, 4, 2) == 0.0


def test_errors_are_typed():
    with pytest.raises(nnmbfl.ParseError):
        nnmbfl.Model.parse("{not json")
    with pytest.raises(nnmbfl.Error):
        nnmbfl.Model.load(FIXTURES / "missing.json")
