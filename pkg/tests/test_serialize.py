import numpy as np
import pytest

import pvfdi
from pvfdi.errors import IoError
from pvfdi.regressors import DEFAULT_KINDS, ModelSpec, fit
from pvfdi.regressors.serialize import FORMAT_VERSION, dumps, load_model, loads, save_model


@pytest.fixture(scope="module")
def fitted_models():
    raw = pvfdi.synth_generate(120, seed=11)
    train_raw, test_raw = pvfdi.split(raw, pvfdi.SplitConfig(0.8, 11))
    train, (test,) = pvfdi.normalize(train_raw, [test_raw])
    overrides = {
        "GPR": {"max_points": 50},
        "GBRT": {"rounds": 5},
        "MLPR": {"hidden": 6, "max_epochs": 20},
        "SVR": {"max_iterations": 2000},
    }
    models = {
        kind: fit(ModelSpec(kind, overrides.get(kind, {}), seed=3), train)
        for kind in DEFAULT_KINDS
    }
    return models, test


@pytest.mark.parametrize("kind", ("LR", "GPR", "KNN", "DT", "GBRT", "SVR", "MLPR", "LASSO"))
def test_round_trip_preserves_predictions(kind, fitted_models, tmp_path):
    models, test = fitted_models
    model = models[kind]
    path = tmp_path / f"{kind}.model"
    save_model(model, path)
    restored = load_model(path)
    assert restored.kind == model.kind
    assert restored.training_feature_count == model.training_feature_count
    np.testing.assert_array_equal(
        restored.predict_batch(test.features), model.predict_batch(test.features)
    )


def test_text_round_trip_is_stable(fitted_models):
    models, _ = fitted_models
    text = dumps(models["GBRT"])
    assert text == dumps(loads(text))


def test_dump_starts_with_magic_and_kind(fitted_models):
    models, _ = fitted_models
    lines = dumps(models["LR"]).splitlines()
    assert lines[0] == f"pvfdi-model {FORMAT_VERSION}"
    assert lines[1] == "str kind LR"
    assert lines[-1] == "end"


def test_bad_magic_rejected():
    with pytest.raises(IoError):
        loads("other-format 1\nkind LR\nend\n")


def test_unknown_version_rejected(fitted_models):
    models, _ = fitted_models
    text = dumps(models["LR"]).replace("pvfdi-model 1", "pvfdi-model 99", 1)
    with pytest.raises(IoError):
        loads(text)


def test_truncated_payload_rejected(fitted_models):
    models, _ = fitted_models
    text = dumps(models["SVR"])
    lines = text.splitlines()
    with pytest.raises(IoError):
        loads("\n".join(lines[: len(lines) // 2]))


def test_missing_file_raises_io_error(tmp_path):
    with pytest.raises(IoError):
        load_model(tmp_path / "nope.model")


def test_mangled_float_rejected(fitted_models):
    models, _ = fitted_models
    text = dumps(models["LR"]).replace("0x", "0q", 1)
    with pytest.raises(IoError):
        loads(text)
