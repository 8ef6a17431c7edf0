import numpy as np
import pytest

from pvfdi.errors import DimensionMismatch, InvalidSpec
from pvfdi.regressors import (
    DEFAULT_KINDS,
    KINDS,
    ModelSpec,
    default_hyperparameters,
    fit,
)


def test_suite_covers_eight_kinds():
    assert len(DEFAULT_KINDS) == 8
    assert set(DEFAULT_KINDS) == set(KINDS)
    assert DEFAULT_KINDS[0] == "LR" and DEFAULT_KINDS[-1] == "LASSO"


def test_defaults_are_copies():
    a = default_hyperparameters("KNN")
    a["k"] = 99
    assert default_hyperparameters("KNN")["k"] == 2


def test_unknown_kind_rejected():
    with pytest.raises(InvalidSpec):
        ModelSpec("RIDGE")
    with pytest.raises(InvalidSpec):
        default_hyperparameters("RIDGE")


def test_unknown_hyperparameter_rejected():
    with pytest.raises(InvalidSpec):
        ModelSpec("KNN", {"neighbours": 3})


def test_out_of_range_values_rejected():
    with pytest.raises(InvalidSpec):
        ModelSpec("KNN", {"k": 0})
    with pytest.raises(InvalidSpec):
        ModelSpec("SVR", {"C": -1.0})
    with pytest.raises(InvalidSpec):
        ModelSpec("GBRT", {"rounds": 0})
    with pytest.raises(InvalidSpec):
        ModelSpec("LASSO", {"lam": -0.5})
    with pytest.raises(InvalidSpec):
        ModelSpec("MLPR", {"hidden": 0})


def test_effective_hyperparameters_merge_defaults():
    spec = ModelSpec("GBRT", {"rounds": 7})
    merged = spec.effective_hyperparameters()
    assert merged["rounds"] == 7
    assert merged["learning_rate"] == 0.1
    assert merged["max_depth"] == 3


def test_fit_accepts_dataset_and_arrays(norm_split):
    train, test = norm_split
    spec = ModelSpec("LR")
    from_dataset = fit(spec, train)
    from_arrays = fit(spec, (train.features, train.power))
    np.testing.assert_array_equal(
        from_dataset.predict_batch(test.features),
        from_arrays.predict_batch(test.features),
    )


def test_fit_attaches_spec(norm_split):
    train, _ = norm_split
    spec = ModelSpec("DT", {"max_depth": 2})
    model = fit(spec, train)
    assert model.spec is spec
    assert model.kind == "DT"


def test_fit_is_deterministic_per_kind(norm_split):
    train, test = norm_split
    small = {
        "GPR": {"max_points": 60},
        "GBRT": {"rounds": 5},
        "MLPR": {"hidden": 6, "max_epochs": 15},
        "SVR": {"max_iterations": 3000},
    }
    for kind in DEFAULT_KINDS:
        spec = ModelSpec(kind, small.get(kind, {}), seed=9)
        a = fit(spec, train).predict_batch(test.features)
        b = fit(spec, train).predict_batch(test.features)
        np.testing.assert_array_equal(a, b)


def test_predict_rejects_wrong_width(norm_split):
    train, _ = norm_split
    model = fit(ModelSpec("LR"), train)
    with pytest.raises(DimensionMismatch):
        model.predict(np.zeros(11))
    with pytest.raises(DimensionMismatch):
        model.predict_batch(np.zeros((4, 13)))


def test_lr_identity_passthrough():
    X = np.eye(12)
    y = X[:, 3].copy()
    model = fit(ModelSpec("LR"), (X, y))
    query = np.zeros(12)
    query[3] = 0.3
    # remove the intercept's pull toward the target mean before checking
    others = model.predict(np.zeros(12))
    assert model.predict(query) - others == pytest.approx(
        0.3 * (model.coefficients[3]), rel=1e-9
    )
    residual = y - model.predict_batch(X)
    assert float(np.abs(residual).max()) < 1e-9


def test_dt_constant_targets(norm_split):
    train, _ = norm_split
    y = np.full(train.power.size, 0.7)
    model = fit(ModelSpec("DT"), (train.features, y))
    np.testing.assert_allclose(model.predict_batch(train.features), 0.7, rtol=1e-12)


def test_seed_flows_to_seeded_kinds(norm_split):
    train, test = norm_split
    a = fit(ModelSpec("MLPR", {"hidden": 6, "max_epochs": 15}, seed=1), train)
    b = fit(ModelSpec("MLPR", {"hidden": 6, "max_epochs": 15}, seed=2), train)
    assert not np.array_equal(a.predict_batch(test.features), b.predict_batch(test.features))
