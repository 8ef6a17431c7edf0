"""Fit the whole regression suite on synthetic PV data and compare errors.

Walks the core path by hand instead of calling the experiment runner:
generate, split, normalize, fit each of the eight model kinds, score on
the held-out side, and round-trip one model through serialization.
Everything is seeded, so the printed table is identical on every run.
"""

import numpy as np

import pvfdi
from pvfdi.metrics import EvaluationSeries, metric_triple
from pvfdi.regressors import DEFAULT_KINDS, ModelSpec, fit
from pvfdi.regressors.serialize import dumps, loads

# A synthetic stand-in for the hourly solar dataset: 12 weather features
# drawn over plausible physical ranges, power in [0, 1] driven mostly by
# incoming radiation. 4000 samples keep every fit near-instant.
raw = pvfdi.synth_generate(4000, seed=42)
print(f"dataset: {len(raw)} rows, checksum {raw.checksum()[:12]}...")

# 80/20 split, then min-max normalization fitted on the training side
# only, so no test-set statistics leak into the features.
train_raw, test_raw = pvfdi.split(raw, pvfdi.SplitConfig(0.8, seed=42))
train, (test,) = pvfdi.normalize(train_raw, [test_raw])
print(f"train {len(train)} rows, test {len(test)} rows")

# Every kind fits through the same two-line spec-then-fit interface.
# Seeds matter only for GPR (subset draw) and MLPR (weight init).
print(f"\n{'model':6}  {'rmse':>8}  {'mse':>8}  {'mae':>8}")
models = {}
for kind in DEFAULT_KINDS:
    model = fit(ModelSpec(kind, seed=42), train)
    series = EvaluationSeries(actual=test.power,
                              predicted=model.predict_batch(test.features))
    t = metric_triple(series)
    models[kind] = model
    print(f"{kind:6}  {t.rmse:8.4f}  {t.mse:8.4f}  {t.mae:8.4f}")

# The constant mean predictor is the floor any real model must clear.
baseline = float(np.sqrt(np.mean((test.power - train.power.mean()) ** 2)))
print(f"\nmean-predictor rmse: {baseline:.4f}")

# Trained models serialize to a versioned text format; reload is
# bit-exact, so predictions survive unchanged.
restored = loads(dumps(models["GBRT"]))
same = np.array_equal(restored.predict_batch(test.features),
                      models["GBRT"].predict_batch(test.features))
print(f"GBRT round-trips through text serialization: {same}")
