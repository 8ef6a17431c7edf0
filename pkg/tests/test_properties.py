import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pvfdi
from pvfdi.errors import DatasetTooSmall, ZeroBaseline
from pvfdi.metrics import EvaluationSeries, mae, mse, percent_change, rmse
from pvfdi.noise import NoiseConfig, inject
from pvfdi.regressors.linear import _soft_threshold
from pvfdi.rng import derive_seed, stream

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
series_pairs = st.lists(st.tuples(finite, finite), min_size=1, max_size=60)


@given(series_pairs)
@settings(max_examples=150)
def test_metric_identities(pairs):
    actual = np.array([a for a, _ in pairs])
    predicted = np.array([p for _, p in pairs])
    s = EvaluationSeries(actual=actual, predicted=predicted)
    direct_mse = sum((a - p) ** 2 for a, p in pairs) / len(pairs)
    assert mse(s) == pytest.approx(direct_mse, rel=1e-9, abs=1e-12)
    assert rmse(s) == pytest.approx(math.sqrt(mse(s)), rel=1e-12)
    assert mae(s) <= rmse(s) + 1e-9
    assert mse(s) >= 0.0 and mae(s) >= 0.0


@given(
    st.floats(min_value=1e-6, max_value=1e6),
    st.floats(min_value=0.0, max_value=1e6),
)
@settings(max_examples=150)
def test_percent_change_invariants(baseline, value):
    change = percent_change(baseline, value)
    assert change == pytest.approx((value - baseline) / baseline * 100.0, rel=1e-12)
    assert percent_change(baseline, baseline) == 0.0
    if value >= baseline:
        assert change >= 0.0


@given(st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_percent_change_zero_baseline_rejected(value):
    with pytest.raises(ZeroBaseline):
        percent_change(0.0, abs(value) + 1.0)


@given(
    st.floats(min_value=-50, max_value=50, allow_nan=False),
    st.floats(min_value=0, max_value=50, allow_nan=False),
)
def test_soft_threshold_shrinks_toward_zero(value, threshold):
    out = _soft_threshold(value, threshold)
    assert abs(out) <= max(abs(value) - threshold, 0.0) + 1e-12
    if abs(value) <= threshold:
        assert out == 0.0
    else:
        assert math.copysign(1.0, out) == math.copysign(1.0, value)
        assert abs(out) == pytest.approx(abs(value) - threshold, rel=1e-12, abs=1e-12)


@given(
    st.integers(min_value=10, max_value=64),
    st.floats(min_value=1e-3, max_value=1.0 - 1e-3),
    st.integers(min_value=0, max_value=2**63),
)
@settings(max_examples=60, deadline=None)
def test_split_partitions_every_row(n, ratio, seed):
    ds = pvfdi.synth_generate(n, seed=1)
    n_train = math.floor(ratio * n)
    if n_train == 0 or n_train == n:
        with pytest.raises(DatasetTooSmall):
            pvfdi.split(ds, pvfdi.SplitConfig(ratio, seed))
        return
    train, test = pvfdi.split(ds, pvfdi.SplitConfig(ratio, seed))
    assert len(train) + len(test) == len(ds)
    assert len(train) == n_train
    merged = np.vstack([train.features, test.features])
    assert sorted(map(tuple, merged)) == sorted(map(tuple, ds.features))


@given(
    st.integers(min_value=10, max_value=80),
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=60, deadline=None)
def test_noise_row_count_rounds_half_up(n, fraction, seed):
    ds = pvfdi.synth_generate(n, seed=2)
    _, affected = inject(ds, NoiseConfig(fraction, seed=seed))
    assert len(affected) == math.floor(fraction * n + 0.5)
    assert len(set(affected)) == len(affected)


@given(st.integers(min_value=0, max_value=2**64 - 1), st.text(max_size=20))
@settings(max_examples=100)
def test_streams_deterministic_per_label(seed, label):
    a = stream(seed, label).integers(0, 2**32, size=4)
    b = stream(seed, label).integers(0, 2**32, size=4)
    np.testing.assert_array_equal(a, b)
    derived = derive_seed(seed, label)
    assert 0 <= derived < 2**64
    assert derived == derive_seed(seed, label)
