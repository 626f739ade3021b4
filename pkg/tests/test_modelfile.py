import json

import numpy as np
import pytest

from l1pofr.dataset import SyntheticSpec, synthesize
from l1pofr.errors import ModelFileError
from l1pofr.experiment import fit
from l1pofr.modelfile import load_model, save_model
from l1pofr.ofr import L1PofrConfig, SparseModel


@pytest.fixture(scope="module")
def model():
    return fit(synthesize(SyntheticSpec("peaks", 0.1, 120, rng_seed=2)), 1.0, L1PofrConfig(1e-4))


def test_roundtrip_predictions(model, tmp_path):
    path = tmp_path / "m.json"
    save_model(model, path)
    back = load_model(path)
    x = np.random.default_rng(0).uniform(-4, 4, size=(500, 2))
    np.testing.assert_allclose(back.predict(x), model.predict(x), rtol=0, atol=1e-12)
    assert back.normalization is not None
    assert back.diagnostics["lambdas"] == model.diagnostics["lambdas"]


def test_human_readable(model, tmp_path):
    path = tmp_path / "m.json"
    save_model(model, path)
    d = json.loads(path.read_text())
    assert d["format_version"] == 1
    assert len(d["theta"]) == model.n_terms


def test_empty_model(tmp_path):
    path = tmp_path / "e.json"
    save_model(SparseModel(np.array([], dtype=int), np.array([]), 1.0, None), path)
    assert load_model(path).predict(np.zeros((3, 2))).tolist() == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"format": "other"}'])
def test_corrupted(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(ModelFileError):
        load_model(path)


def test_wrong_version(model, tmp_path):
    path = tmp_path / "m.json"
    save_model(model, path)
    d = json.loads(path.read_text())
    d["format_version"] = 99
    path.write_text(json.dumps(d))
    with pytest.raises(ModelFileError, match="format_version"):
        load_model(path)


def test_truncated_arrays(model, tmp_path):
    path = tmp_path / "m.json"
    save_model(model, path)
    d = json.loads(path.read_text())
    d["theta"] = d["theta"][:-1]
    path.write_text(json.dumps(d))
    with pytest.raises(ModelFileError):
        load_model(path)
